#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"

namespace topoforge
{

/// Labeled and unlabeled topology counts for n = 0..5.
inline constexpr std::size_t known_labeled_counts[] = { 1, 1, 4, 29, 355, 6942 };
inline constexpr std::size_t known_unlabeled_counts[] = { 1, 1, 3, 9, 33, 139 };

inline std::size_t suite_cap()
{
  return 4;
}

struct SuiteConfig
{
  std::size_t max_n = 3;
  std::uint64_t seed = 0;
  /// Random instances per budgeted theorem at n = 4.
  std::size_t samples = 200;
  std::size_t jobs = 1;
  FingerprintBudget budget{ .lindelof_quantifier_cap = 8 };
  /// Test hooks: edit the enumerated spaces of size n, or a record after fingerprinting.
  std::function<void( std::size_t, std::vector<FiniteSpace>& )> tamper_spaces;
  std::function<void( CatalogRecord& )> tamper_record;
};

struct TheoremResult
{
  std::string id;
  std::string statement;
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  /// Reported counterexamples to claims that are known not to hold; never a failure.
  std::uint64_t findings = 0;
  std::string first_violation;
  std::string note;
  double millis = 0;

  bool passed() const noexcept { return violations == 0; }

  void violate( const std::string& what )
  {
    ++violations;
    if ( first_violation.empty() )
      first_violation = what;
  }

  void expect( bool ok, const std::string& what )
  {
    ++instances;
    if ( !ok )
      violate( what );
  }
};

struct SuiteReport
{
  std::size_t max_n = 0;
  std::uint64_t seed = 0;
  std::vector<TheoremResult> theorems;
  double millis = 0;

  std::uint64_t violations() const
  {
    std::uint64_t v = 0;
    for ( const auto& t : theorems )
      v += t.violations;
    return v;
  }

  std::uint64_t findings() const
  {
    std::uint64_t v = 0;
    for ( const auto& t : theorems )
      v += t.findings;
    return v;
  }

  const TheoremResult* find( const std::string& id ) const
  {
    for ( const auto& t : theorems )
      if ( t.id == id )
        return &t;
    return nullptr;
  }

  std::string render( bool timing = true ) const
  {
    std::ostringstream os;
    os << "suite max-n " << max_n << " seed " << seed << "\n";
    for ( const auto& t : theorems )
    {
      os << ( t.passed() ? "PASS " : "FAIL " ) << t.id << "  instances " << t.instances << "  violations " << t.violations
         << "  findings " << t.findings;
      if ( timing )
        os << "  " << static_cast<long long>( t.millis ) << " ms";
      os << "\n";
      if ( !t.first_violation.empty() )
        os << "     first violation: " << t.first_violation << "\n";
      if ( !t.note.empty() )
        os << "     note: " << t.note << "\n";
    }
    os << "total violations " << violations() << ", findings " << findings();
    if ( timing )
      os << ", " << static_cast<long long>( millis ) << " ms";
    os << "\n";
    return os.str();
  }
};

namespace detail
{

/// Reflexive transitive relations on n points, counted straight from the definition.
inline std::size_t count_preorders( std::size_t n )
{
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for ( std::size_t x = 0; x < n; ++x )
    for ( std::size_t y = 0; y < n; ++y )
      if ( x != y )
        off.emplace_back( x, y );
  std::size_t count = 0;
  for ( Mask rel = 0; rel < ( Mask{ 1 } << off.size() ); ++rel )
  {
    std::vector<Mask> up( n );
    for ( std::size_t x = 0; x < n; ++x )
      up[x] = bits::single( x );
    for ( std::size_t i = 0; i < off.size(); ++i )
      if ( ( rel >> i ) & 1u )
        up[off[i].first] |= bits::single( off[i].second );
    bool transitive = true;
    for ( std::size_t x = 0; x < n && transitive; ++x )
      bits::for_each( up[x], [&]( std::size_t y ) { transitive = transitive && bits::subset( up[y], up[x] ); } );
    count += transitive ? 1 : 0;
  }
  return count;
}

inline std::string masks_text( const std::vector<Mask>& v, std::size_t n )
{
  std::string out = "[";
  for ( std::size_t i = 0; i < v.size(); ++i )
    out += ( i ? "," : "" ) + PointSet( n, v[i] ).to_string();
  return out + "]";
}

inline std::vector<Mask> random_neighborhood_assignment( const FiniteSpace& s, std::mt19937_64& rng )
{
  std::vector<Mask> nb( s.size() );
  for ( std::size_t x = 0; x < s.size(); ++x )
  {
    const auto choices = s.opens_containing( x );
    nb[x] = choices[std::uniform_int_distribution<std::size_t>( 0, choices.size() - 1 )( rng )];
  }
  return nb;
}

} // namespace detail

/*! \brief Replays every module invariant over the labeled catalog up to max_n.

  Spaces with n <= 3 are covered exhaustively; n = 4 checks that would enumerate
  assignments use `samples` seeded random instances instead. Exceptions thrown by a
  check count as violations of that theorem.
*/
inline SuiteReport run_suite( const SuiteConfig& config )
{
  if ( config.max_n > suite_cap() )
    throw resource_error( "suite is capped at max-n " + std::to_string( suite_cap() ) + ", got " +
                          std::to_string( config.max_n ) );
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  SuiteReport report;
  report.max_n = config.max_n;
  report.seed = config.seed;
  std::mt19937_64 rng( config.seed );
  const std::size_t small_n = std::min<std::size_t>( config.max_n, 3 );

  auto run = [&]( const std::string& id, const std::string& statement, auto&& body ) {
    TheoremResult t;
    t.id = id;
    t.statement = statement;
    const auto t0 = clock::now();
    try
    {
      body( t );
    }
    catch ( const std::exception& e )
    {
      t.violate( std::string( "exception: " ) + e.what() );
    }
    t.millis = std::chrono::duration<double, std::milli>( clock::now() - t0 ).count();
    report.theorems.push_back( std::move( t ) );
  };

  std::vector<std::vector<FiniteSpace>> by_n( config.max_n + 1 );
  std::vector<FiniteSpace> all;
  std::vector<FiniteSpace> small;
  for ( std::size_t n = 1; n <= config.max_n; ++n )
  {
    by_n[n] = enumerate_topologies( n, EnumerationMode::labeled );
    if ( config.tamper_spaces )
      config.tamper_spaces( n, by_n[n] );
    all.insert( all.end(), by_n[n].begin(), by_n[n].end() );
    if ( n <= small_n )
      small.insert( small.end(), by_n[n].begin(), by_n[n].end() );
  }

  run( "catalog.labeled_counts", "labeled enumeration yields each topology once, matching the preorder count",
       [&]( TheoremResult& t ) {
         for ( std::size_t n = 1; n <= config.max_n; ++n )
         {
           std::set<std::vector<Mask>> distinct;
           for ( const auto& s : by_n[n] )
             distinct.emplace( s.open_masks().begin(), s.open_masks().end() );
           const auto preorders = detail::count_preorders( n );
           t.expect( by_n[n].size() == known_labeled_counts[n] && preorders == known_labeled_counts[n] &&
                         distinct.size() == by_n[n].size(),
                     "n=" + std::to_string( n ) + ": " + std::to_string( by_n[n].size() ) + " spaces, " +
                         std::to_string( distinct.size() ) + " distinct, " + std::to_string( preorders ) +
                         " preorders, expected " + std::to_string( known_labeled_counts[n] ) );
         }
       } );

  run( "catalog.unlabeled_counts", "relabeling classes match the known counts", [&]( TheoremResult& t ) {
    for ( std::size_t n = 1; n <= config.max_n; ++n )
    {
      std::set<std::vector<Mask>> classes;
      for ( const auto& s : by_n[n] )
        classes.insert( canonical_encoding( s ) );
      const auto reps = enumerate_topologies( n, EnumerationMode::unlabeled );
      t.expect( classes.size() == known_unlabeled_counts[n] && reps.size() == classes.size(),
                "n=" + std::to_string( n ) + ": " + std::to_string( classes.size() ) + " classes, expected " +
                    std::to_string( known_unlabeled_counts[n] ) );
    }
  } );

  run( "catalog.canonical", "canonical form is idempotent; equal hashes exactly when homeomorphic",
       [&]( TheoremResult& t ) {
         for ( std::size_t n = 1; n <= config.max_n; ++n )
         {
           std::map<std::uint64_t, std::vector<const FiniteSpace*>> buckets;
           for ( const auto& s : by_n[n] )
           {
             const auto c = canonical_form( s );
             t.expect( canonical_form( c ) == c && find_homeomorphism( s, c ).has_value(),
                       "canonical form of " + s.to_string() );
             buckets[canonical_hash( s )].push_back( &s );
           }
           std::vector<const FiniteSpace*> reps;
           for ( const auto& [h, members] : buckets )
           {
             reps.push_back( members.front() );
             for ( const auto* m : members )
               t.expect( find_homeomorphism( *members.front(), *m ).has_value(),
                         "equal hash without homeomorphism: " + m->to_string() );
           }
           for ( std::size_t i = 0; i < reps.size(); ++i )
             for ( std::size_t j = i + 1; j < reps.size(); ++j )
               t.expect( !find_homeomorphism( *reps[i], *reps[j] ),
                         "homeomorphic spaces with different hashes: " + reps[i]->to_string() );
         }
       } );

  std::vector<CatalogRecord> records;
  run( "catalog.records", "every record satisfies e <= L and D => e = L", [&]( TheoremResult& t ) {
    records = fingerprint_all( all, config.budget, config.jobs );
    for ( auto& r : records )
    {
      if ( config.tamper_record )
        config.tamper_record( r );
      t.expect( r.invariants_hold(), "record invariants fail on " + r.space.to_string() );
    }
  } );

  run( "puf.upset_oracle", "the puf space equals the up-set topology", [&]( TheoremResult& t ) {
    const std::size_t top = std::min<std::size_t>( universe_cap_bits(), 4 );
    constexpr std::size_t counts[] = { 2, 3, 6, 20, 168 };
    for ( std::size_t n = 0; n <= top; ++n )
    {
      const auto p = build_puf_space( n );
      t.expect( p.space == upset_oracle( n ) && p.space.open_count() == counts[n],
                "puf n=" + std::to_string( n ) + " has " + std::to_string( p.space.open_count() ) + " opens" );
    }
  } );

  run( "puf.shrink_maps", "R^-1(U(x)) lies within U(x) for every shrink map; equality only for R = id",
       [&]( TheoremResult& t ) {
         for ( std::size_t n = 1; n <= 2; ++n )
         {
           const std::size_t points = power_set_size( n );
           PowerSetMap r( points, 0 );
           auto rec = [&]( auto&& self, std::size_t a ) -> void {
             if ( a == points )
             {
               const auto rep = check_shrink_map( n, r );
               bool identity = true;
               for ( std::size_t b = 0; b < points; ++b )
                 identity = identity && r[b] == b;
               bool within = true;
               for ( const auto& p : rep.points )
                 within = within && p.within_ultrafilter;
               t.expect( within, "shrink map inclusion fails at n=" + std::to_string( n ) );
               if ( !rep.all_equal() )
                 ++t.findings;
               t.expect( rep.all_equal() == identity, "equality without identity at n=" + std::to_string( n ) );
               return;
             }
             for ( Mask b = a;; b = ( b - 1 ) & a )
             {
               r[a] = b;
               self( self, a + 1 );
               if ( b == 0 )
                 break;
             }
           };
           rec( rec, 0 );
         }
         t.note = "findings count shrink maps whose preimages differ from the ultrafilters";
       } );

  run( "assignment.companion",
       "companion preimage identity, continuity, uniqueness, restriction traces and refinement routes",
       [&]( TheoremResult& t ) {
         auto check = [&]( const FiniteSpace& s, const std::vector<Mask>& sets ) {
           const auto a = SetAssignment::from_masks( s, sets );
           const auto label = detail::masks_text( sets, s.size() ) + " on " + s.to_string();
           const auto f = companion_map( a );
           t.expect( f.certified() && f.as_continuous_map().certified(), "companion certificate: " + label );
           t.expect( verify_companion_unique( a, 1u << 16 ).unique(), "companion not unique: " + label );
           const Mask indices = bits::full( sets.size() );
           for ( Mask k = 0;; k = ( k - indices ) & indices )
           {
             t.expect( restrict_assignment( a, PointSet( sets.size(), k ) ).companion_agrees, "restriction trace: " + label );
             if ( k == indices )
               break;
           }
           for ( std::size_t i = 0; i < sets.size(); ++i )
             for ( auto u : s.open_masks() )
             {
               auto other = sets;
               other[i] = u;
               const auto r = is_refinement( SetAssignment::from_masks( s, other ), a );
               t.expect( r.direct == r.companion_route, "refinement routes: " + label );
             }
         };
         for ( const auto& s : small )
           for ( std::size_t m = 1; m <= 3; ++m )
             for_each_set_assignment( s, m, [&]( const std::vector<Mask>& sets ) { check( s, sets ); } );
         if ( config.max_n >= 4 )
           for ( std::size_t i = 0; i < config.samples; ++i )
           {
             const auto& s = by_n[4][std::uniform_int_distribution<std::size_t>( 0, by_n[4].size() - 1 )( rng )];
             const std::size_t m = std::uniform_int_distribution<std::size_t>( 1, 3 )( rng );
             std::vector<Mask> sets( m );
             for ( auto& v : sets )
               v = s.open_masks()[std::uniform_int_distribution<std::size_t>( 0, s.open_count() - 1 )( rng )];
             check( s, sets );
           }
       } );

  run( "covering.extent_lindelof", "e(X) <= L(X), with both Lindelof routes agreeing", [&]( TheoremResult& t ) {
    for ( const auto& r : records )
    {
      const auto l = lindelof_degree( r.space, config.budget.lindelof_quantifier_cap );
      t.expect( l.agrees() && r.fingerprint.extent <= r.fingerprint.lindelof, "e <= L fails on " + r.space.to_string() );
    }
  } );

  run( "dspace.extent_equals_lindelof", "e(X) = L(X) whenever X is a D-space", [&]( TheoremResult& t ) {
    for ( const auto& r : records )
      if ( r.fingerprint.d == DStatus::yes )
        t.expect( r.fingerprint.extent == r.fingerprint.lindelof, "D space with e < L: " + r.space.to_string() );
  } );

  run( "covering.exclusiveness", "definitional and closed-subset routes agree; exclusiveness >= 1 iff T1",
       [&]( TheoremResult& t ) {
         for ( const auto& s : all )
         {
           const auto e = exclusiveness( s );
           t.expect( e.agrees() && ( e.value() >= 1 ) == is_t1( s ), "exclusiveness on " + s.to_string() );
         }
       } );

  run( "covering.implication_chain", "left-separated => GLS => D, and D => aD", [&]( TheoremResult& t ) {
    for ( const auto& r : records )
    {
      const auto& f = r.fingerprint;
      if ( f.left_separated && f.gls )
        t.expect( !*f.left_separated || *f.gls, "left-separated but not GLS: " + r.space.to_string() );
      if ( f.gls )
        t.expect( !*f.gls || f.d == DStatus::yes, "GLS but not D: " + r.space.to_string() );
      t.expect( f.d != DStatus::yes || f.ad, "D but not aD: " + r.space.to_string() );
    }
    if ( config.max_n >= 2 )
    {
      const auto r = fingerprint( FiniteSpace::indiscrete( 2 ), config.budget );
      t.expect( r.fingerprint.ad && r.fingerprint.d == DStatus::no, "indiscrete 2-point space should be aD and not D" );
      std::size_t separations = 0;
      for ( const auto& rec : records )
        separations += rec.fingerprint.ad && rec.fingerprint.d == DStatus::no ? 1 : 0;
      t.note = std::to_string( separations ) + " catalog spaces are aD but not D";
    }
  } );

  std::vector<CharacterizationWitness> witnesses;
  run( "dspace.characterization", "kernel witnesses and pullback diagonals exist exactly for D verdicts",
       [&]( TheoremResult& t ) {
         auto check = [&]( const FiniteSpace& s, const std::vector<Mask>& nb ) {
           const auto w = characterization_witness( SetAssignment::neighborhoods( s, nb ) );
           if ( !w )
             return false;
           t.expect( pullback_diagonal_check( *w ).passed(),
                     "pullback diagonal fails for " + detail::masks_text( nb, s.size() ) + " on " + s.to_string() );
           witnesses.push_back( *w );
           return true;
         };
         for ( const auto& s : small )
         {
           bool all_witnessed = true;
           for_each_neighborhood_assignment( s, [&]( const std::vector<Mask>& nb ) { all_witnessed = check( s, nb ) && all_witnessed; } );
           t.expect( all_witnessed == ( dspace_check( s ).status == DStatus::yes ), "verdict disagrees on " + s.to_string() );
         }
         if ( config.max_n >= 4 )
           for ( std::size_t i = 0; i < config.samples; ++i )
           {
             const auto& s = by_n[4][std::uniform_int_distribution<std::size_t>( 0, by_n[4].size() - 1 )( rng )];
             const auto nb = detail::random_neighborhood_assignment( s, rng );
             const bool witnessed = check( s, nb );
             if ( dspace_check( s ).status == DStatus::yes )
               t.expect( witnessed, "D space without witness: " + s.to_string() );
           }
       } );

  run( "dspace.greedy", "greedy succeeds for every order on T1 spaces and every success validates",
       [&]( TheoremResult& t ) {
         for ( const auto& s : all )
         {
           if ( s.size() > 3 && !is_t1( s ) )
             continue;
           const bool t1 = is_t1( s );
           for_each_neighborhood_assignment( s, [&]( const std::vector<Mask>& nb ) {
             const auto n = SetAssignment::neighborhoods( s, nb );
             auto order = identity_order( s.size() );
             do
             {
               const auto g = greedy_kernel( n, order );
               if ( g.success )
                 t.expect( is_closed_discrete_mask( s, g.kernel ) && is_kernel( n, PointSet( s.size(), g.kernel ) ),
                           "greedy success does not validate on " + s.to_string() );
               else if ( t1 )
                 t.violate( "greedy fails on T1 space " + s.to_string() + " order " + render_order( order ) );
               else
                 ++t.findings;
             } while ( std::next_permutation( order.begin(), order.end() ) );
           } );
         }
         const auto sierpinski = SetAssignment::neighborhoods( FiniteSpace::sierpinski(), { 0b01, 0b11 } );
         const auto first = greedy_kernel( sierpinski, { 0, 1 } ).render();
         t.expect( first == greedy_kernel( sierpinski, { 0, 1 } ).render(), "Sierpinski trace is not reproducible" );
         t.note = "findings count failed orders on non-T1 spaces";
       } );

  run( "dspace.forced_points", "forced points lie in every kernel of every refinement", [&]( TheoremResult& t ) {
    for ( const auto& s : small )
      for_each_neighborhood_assignment( s, [&]( const std::vector<Mask>& nb ) {
        t.expect( forced_points( SetAssignment::neighborhoods( s, nb ) ).verified, "forced points on " + s.to_string() );
      } );
  } );

  run( "dspace.double_puncture", "the doubly punctured assignment keeps every kernel; non-singleton traces are findings",
       [&]( TheoremResult& t ) {
         for ( const auto& s : small )
         {
           if ( !is_t1( s ) )
             continue;
           for_each_neighborhood_assignment( s, [&]( const std::vector<Mask>& nb ) {
             const auto n = SetAssignment::neighborhoods( s, nb );
             for ( Mask d = 1; d <= s.full_mask(); ++d )
             {
               if ( union_over( nb, d ) != s.full_mask() )
                 continue;
               const auto r = double_puncture( n, PointSet( s.size(), d ) );
               t.expect( r.kernel_preserved && r.never_empty && r.refinement_open, "double puncture on " + s.to_string() );
               if ( !r.singleton_on_kernel )
                 ++t.findings;
             }
           } );
         }
         t.note = "findings count kernels where the doubly punctured trace is not a singleton";
       } );

  run( "dspace.closed_images", "closed continuous images of D-spaces are D-spaces", [&]( TheoremResult& t ) {
    for ( const auto& a : small )
      for ( const auto& b : small )
      {
        if ( b.size() > a.size() )
          continue;
        for ( const auto& m : continuous_maps( a, b ) )
          if ( m.is_surjective() && m.is_closed_map() )
            t.expect( !closed_image_transfer( m ).violation, "closed image of " + a.to_string() + " onto " + b.to_string() );
      }
  } );

  run( "cat.mono_epi", "concrete and categorical mono/epi routes agree", [&]( TheoremResult& t ) {
    for ( const auto& a : small )
      for ( const auto& b : small )
        for ( const auto& f : continuous_maps( a, b ) )
          t.expect( is_mono( f ).agrees() && is_epi( f ).agrees(), "mono/epi routes disagree on a map " + a.to_string() );
  } );

  run( "cat.universal_properties", "products, equalizers and pullbacks from D witnesses have unique mediating maps",
       [&]( TheoremResult& t ) {
         std::set<std::pair<std::string, std::vector<Mask>>> seen;
         for ( const auto& w : witnesses )
         {
           if ( !seen.emplace( w.original.space().to_string() + "/" + std::to_string( w.kernel ), w.g ).second )
             continue;
           const auto pd = pullback_diagonal_check( w );
           const auto& pb = pd.pb;
           t.expect( product_ump( pb.ambient ).passed(), "product UMP on " + w.original.to_string() );
           const auto fl = compose( pd.g, pb.ambient.pi1 );
           const auto gl = compose( pd.singleton, pb.ambient.pi2 );
           t.expect( equalizer_ump( pb.eq, fl, gl ).passed(), "equalizer UMP on " + w.original.to_string() );
           t.expect( pullback_ump( pb, pd.g, pd.singleton ).passed(), "pullback UMP on " + w.original.to_string() );
         }
       } );

  run( "cat.functor", "F(id) = id and F(t2 t1) = F(t2) F(t1) on n <= 2 ground spaces", [&]( TheoremResult& t ) {
    std::vector<FiniteSpace> ground;
    for ( const auto& s : all )
      if ( s.size() <= 2 )
        ground.push_back( s );
    for ( const auto& a : ground )
      for ( const auto& b : ground )
        for ( const auto& c : ground )
          for ( const auto& t1 : continuous_maps( a, b ) )
            for ( const auto& t2 : continuous_maps( b, c ) )
              t.expect( functor_check( t1, t2 ).all(), "functor laws fail from " + a.to_string() );
  } );

  report.millis = std::chrono::duration<double, std::milli>( clock::now() - start ).count();
  return report;
}

} // namespace topoforge
