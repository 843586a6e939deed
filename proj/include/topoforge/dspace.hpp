#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "cat_top.hpp"
#include "continuous_map.hpp"
#include "errors.hpp"
#include "finite_space.hpp"
#include "point_set.hpp"
#include "puf.hpp"

namespace topoforge
{

/// Product over points of the number of opens containing the point; saturates at uint64 max.
inline std::uint64_t neighborhood_assignment_count( const FiniteSpace& space )
{
  std::uint64_t total = 1;
  for ( std::size_t x = 0; x < space.size(); ++x )
  {
    const std::uint64_t k = space.opens_containing( x ).size();
    if ( total > std::numeric_limits<std::uint64_t>::max() / k )
      return std::numeric_limits<std::uint64_t>::max();
    total *= k;
  }
  return total;
}

/// Closed discrete subsets in increasing size, ties by numeric value.
inline std::vector<Mask> closed_discrete_subsets( const FiniteSpace& space )
{
  std::vector<Mask> out;
  for ( Mask d = 0; d <= space.full_mask(); ++d )
    if ( is_closed_discrete_mask( space, d ) )
      out.push_back( d );
  std::sort( out.begin(), out.end(), bits::canonical_less );
  return out;
}

inline Mask union_over( const std::vector<Mask>& sets, Mask indices ) noexcept
{
  Mask u = 0;
  bits::for_each( indices, [&]( std::size_t x ) { u |= sets[x]; } );
  return u;
}

/// First entry of `candidates` whose assigned sets cover the space.
inline std::optional<Mask> first_kernel( const std::vector<Mask>& candidates, const std::vector<Mask>& nbhd, Mask full )
{
  for ( auto d : candidates )
    if ( union_over( nbhd, d ) == full )
      return d;
  return std::nullopt;
}

/// Smallest closed discrete kernel, lowest value among equal sizes.
inline std::optional<PointSet> kernel_search( const SetAssignment& n )
{
  require_neighborhood( n, "kernel_search" );
  const auto k = first_kernel( closed_discrete_subsets( n.space() ), n.masks(), n.space().full_mask() );
  if ( !k )
    return std::nullopt;
  return PointSet( n.space().size(), *k );
}

enum class DStatus
{
  yes,
  no,
  unknown_sampled
};

inline const char* to_string( DStatus s )
{
  switch ( s )
  {
  case DStatus::yes:
    return "yes";
  case DStatus::no:
    return "no";
  case DStatus::unknown_sampled:
    return "unknown-sampled";
  }
  return "?";
}

struct DVerdict
{
  DStatus status = DStatus::unknown_sampled;
  /// One kernel per checked assignment, in enumeration order (exhaustive yes only, when requested).
  std::vector<Mask> witnesses;
  std::optional<std::vector<Mask>> counterexample;
  std::uint64_t assignments_checked = 0;
  std::uint64_t assignments_total = 0;
};

struct DCheckOptions
{
  std::uint64_t cap = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t samples = 2000;
  bool keep_witnesses = false;
};

/*! \brief Decides the D-property: exhaustive when the assignment count is within the cap,
  otherwise seeded sampling, which can only refute.
*/
inline DVerdict dspace_check( const FiniteSpace& space, const DCheckOptions& opt = {} )
{
  DVerdict v;
  v.assignments_total = neighborhood_assignment_count( space );
  const auto candidates = closed_discrete_subsets( space );
  const Mask full = space.full_mask();

  if ( v.assignments_total <= opt.cap )
  {
    bool refuted = false;
    for_each_neighborhood_assignment( space, [&]( const std::vector<Mask>& nb ) {
      if ( refuted )
        return;
      ++v.assignments_checked;
      const auto k = first_kernel( candidates, nb, full );
      if ( !k )
      {
        refuted = true;
        v.counterexample = nb;
        return;
      }
      if ( opt.keep_witnesses )
        v.witnesses.push_back( *k );
    } );
    v.status = refuted ? DStatus::no : DStatus::yes;
    if ( refuted )
      v.witnesses.clear();
    return v;
  }

  std::mt19937_64 rng( opt.seed );
  std::vector<std::vector<Mask>> choices( space.size() );
  for ( std::size_t x = 0; x < space.size(); ++x )
    choices[x] = space.opens_containing( x );
  std::vector<Mask> nb( space.size() );
  for ( std::uint64_t s = 0; s < opt.samples; ++s )
  {
    for ( std::size_t x = 0; x < space.size(); ++x )
      nb[x] = choices[x][std::uniform_int_distribution<std::size_t>( 0, choices[x].size() - 1 )( rng )];
    ++v.assignments_checked;
    if ( !first_kernel( candidates, nb, full ) )
    {
      v.status = DStatus::no;
      v.counterexample = nb;
      return v;
    }
  }
  v.status = DStatus::unknown_sampled;
  return v;
}

/// Every finite space is fair: a finite nested chain has its largest member as union.
struct FairnessNote
{
  bool fair = true;
  const char* reason = "a nested chain of closed discrete sets in a finite space is finite, so its union is its largest member";
};

inline FairnessNote is_fair( const FiniteSpace& )
{
  return {};
}

struct GreedyResult
{
  std::vector<std::size_t> order;
  Mask kernel = 0;
  /// N with the picked points punctured; entries need not be open off T1 spaces.
  std::vector<Mask> refinement;
  std::vector<std::size_t> picks;
  bool closed = false;
  bool discrete = false;
  bool covers = false;
  bool refinement_open = false;
  bool success = false;
  std::vector<std::string> trace;

  std::string render() const
  {
    std::string out;
    for ( const auto& line : trace )
      out += line + "\n";
    return out;
  }
};

inline std::vector<std::size_t> identity_order( std::size_t n )
{
  std::vector<std::size_t> o( n );
  std::iota( o.begin(), o.end(), std::size_t{ 0 } );
  return o;
}

inline std::string render_order( const std::vector<std::size_t>& order )
{
  std::string out = "(";
  for ( std::size_t i = 0; i < order.size(); ++i )
    out += ( i ? "," : "" ) + std::to_string( order[i] );
  return out + ")";
}

/*! \brief Picks the first uncovered point in the given order, adds it to D, and removes
  the previously picked points from its set, until everything is covered.

  Success means D is closed discrete and a kernel of the final refinement.
*/
inline GreedyResult greedy_kernel( const SetAssignment& n, const std::vector<std::size_t>& order )
{
  require_neighborhood( n, "greedy_kernel" );
  const auto& space = n.space();
  std::vector<std::size_t> sorted = order;
  std::sort( sorted.begin(), sorted.end() );
  if ( sorted != identity_order( space.size() ) )
    throw input_error( "order " + render_order( order ) + " is not a permutation of the points" );
  const std::size_t np = space.size();
  GreedyResult r;
  r.order = order;
  r.refinement = n.masks();
  r.trace.push_back( "order " + render_order( order ) );
  Mask d = 0;
  for ( std::size_t step = 1; step <= np; ++step )
  {
    const Mask covered = union_over( r.refinement, d );
    std::optional<std::size_t> pick;
    for ( auto x : order )
      if ( !bits::has( covered, x ) )
      {
        pick = x;
        break;
      }
    if ( !pick )
      break;
    const Mask previous = d;
    d |= bits::single( *pick );
    r.refinement[*pick] &= ~previous;
    r.picks.push_back( *pick );
    r.trace.push_back( "step " + std::to_string( step ) + ": pick " + std::to_string( *pick ) + ", D = " +
                       PointSet( np, d ).to_string() + ", N(" + std::to_string( *pick ) + ") = " +
                       PointSet( np, r.refinement[*pick] ).to_string() );
  }
  r.kernel = d;
  r.closed = space.is_closed( d );
  r.discrete = is_discrete_mask( space, d );
  r.covers = union_over( r.refinement, d ) == space.full_mask();
  r.refinement_open = true;
  for ( auto m : r.refinement )
    r.refinement_open = r.refinement_open && space.is_open( m );
  r.success = r.closed && r.discrete && r.covers;
  auto yn = []( bool b ) { return b ? "yes" : "no"; };
  r.trace.push_back( std::string( "check D = " ) + PointSet( np, d ).to_string() + ": closed " + yn( r.closed ) +
                     ", discrete " + yn( r.discrete ) + ", kernel " + yn( r.covers ) + ", refinement open " +
                     yn( r.refinement_open ) );
  r.trace.push_back( r.success ? "result: kernel " + PointSet( np, d ).to_string() : std::string( "result: failure" ) );
  return r;
}

struct AllOrdersResult
{
  std::optional<GreedyResult> first_success;
  std::size_t orders_tried = 0;
  std::size_t orders_succeeded = 0;
  /// Set when every order fails although some closed discrete kernel exists.
  std::optional<std::string> finding;
};

/// Runs every order in lexicographic order; `stop_at_first` returns on the first success.
inline AllOrdersResult greedy_kernel_all_orders( const SetAssignment& n, std::size_t cap = 8, bool stop_at_first = true )
{
  require_neighborhood( n, "greedy_kernel_all_orders" );
  if ( n.space().size() > cap )
    throw resource_error( "greedy_kernel_all_orders is capped at n = " + std::to_string( cap ) + ", got " +
                          std::to_string( n.space().size() ) );
  AllOrdersResult out;
  auto order = identity_order( n.space().size() );
  do
  {
    ++out.orders_tried;
    auto r = greedy_kernel( n, order );
    if ( r.success )
    {
      ++out.orders_succeeded;
      if ( !out.first_success )
        out.first_success = std::move( r );
      if ( stop_at_first )
        return out;
    }
  } while ( std::next_permutation( order.begin(), order.end() ) );
  if ( !out.first_success )
  {
    if ( const auto k = kernel_search( n ) )
      out.finding = "every greedy order fails on " + n.to_string() + " although " + k->to_string() +
                    " is a closed discrete kernel";
  }
  return out;
}

struct ForcedPoints
{
  Mask points = 0;
  /// Every kernel of N and of every checked neighborhood refinement contains the forced points.
  bool verified = false;
  std::uint64_t refinements_checked = 0;
  bool refinements_exhaustive = false;
};

/// Kernels here are all covering subsets, closed discrete or not.
inline bool forced_in_every_kernel( const FiniteSpace& space, const std::vector<Mask>& nb, Mask forced )
{
  for ( Mask d = 0; d <= space.full_mask(); ++d )
    if ( union_over( nb, d ) == space.full_mask() && !bits::subset( forced, d ) )
      return false;
  return true;
}

/// Points d whose only assigned set containing d is N(d).
inline ForcedPoints forced_points( const SetAssignment& n, std::uint64_t refinement_cap = 100'000 )
{
  require_neighborhood( n, "forced_points" );
  const auto& space = n.space();
  ForcedPoints r;
  for ( std::size_t d = 0; d < space.size(); ++d )
  {
    bool only = true;
    for ( std::size_t x = 0; x < space.size() && only; ++x )
      if ( x != d && bits::has( n.mask( x ), d ) )
        only = false;
    if ( only )
      r.points |= bits::single( d );
  }
  r.verified = forced_in_every_kernel( space, n.masks(), r.points );

  std::vector<std::vector<Mask>> choices( space.size() );
  std::uint64_t total = 1;
  for ( std::size_t x = 0; x < space.size(); ++x )
  {
    for ( auto u : space.opens_containing( x ) )
      if ( bits::subset( u, n.mask( x ) ) )
        choices[x].push_back( u );
    total = total > refinement_cap ? total : total * choices[x].size();
  }
  r.refinements_exhaustive = total <= refinement_cap;
  std::vector<Mask> cur( space.size() );
  auto rec = [&]( auto&& self, std::size_t x ) -> void {
    if ( !r.verified || r.refinements_checked >= refinement_cap )
      return;
    if ( x == space.size() )
    {
      ++r.refinements_checked;
      r.verified = forced_in_every_kernel( space, cur, r.points );
      return;
    }
    for ( auto u : choices[x] )
    {
      cur[x] = u;
      self( self, x + 1 );
    }
  };
  rec( rec, 0 );
  return r;
}

struct CriterionReport
{
  bool t1 = false;
  bool kernel = false;
  /// N(x) meets D only in x for x in D.
  bool isolated = false;
  bool applicable = false;
  bool closed = false;
  bool discrete = false;

  bool conclusion() const noexcept { return closed && discrete; }
};

/// Raw sets are accepted so that non-open punctured families can be diagnosed.
inline CriterionReport closed_discrete_criterion( const FiniteSpace& space, const std::vector<Mask>& nb, const PointSet& d )
{
  space.require_universe( d );
  if ( nb.size() != space.size() )
    throw input_error( "closed_discrete_criterion needs one set per point" );
  CriterionReport r;
  r.t1 = is_t1( space );
  r.kernel = union_over( nb, d.mask() ) == space.full_mask();
  r.isolated = true;
  bits::for_each( d.mask(), [&]( std::size_t x ) { r.isolated = r.isolated && ( nb[x] & d.mask() ) == bits::single( x ); } );
  r.applicable = r.t1 && r.kernel && r.isolated;
  r.closed = space.is_closed( d.mask() );
  r.discrete = is_discrete_mask( space, d.mask() );
  if ( r.applicable && !r.conclusion() )
    throw certification_failure( "closed discrete criterion applies but " + d.to_string() + " is not closed discrete" );
  return r;
}

inline CriterionReport closed_discrete_criterion( const SetAssignment& n, const PointSet& d )
{
  return closed_discrete_criterion( n.space(), n.masks(), d );
}

struct CharacterizationWitness
{
  SetAssignment original;
  Mask kernel = 0;
  SetAssignment refined;
  CompanionMap f_star;
  /// g(x) = f*(x) intersected with D, re-indexed onto D.
  std::vector<Mask> g;
  bool never_empty = false;
  bool singleton_on_kernel = false;

  bool certified() const noexcept { return never_empty && singleton_on_kernel; }
};

/// Kernel search, then the punctured refinement, its companion, and the trace onto D.
inline std::optional<CharacterizationWitness> characterization_witness( const SetAssignment& n )
{
  const auto k = kernel_search( n );
  if ( !k )
    return std::nullopt;
  CharacterizationWitness w;
  w.original = n;
  w.kernel = k->mask();
  w.refined = puncture_refinement( n, *k );
  w.f_star = companion_map( w.refined );
  w.g.resize( n.space().size() );
  for ( std::size_t x = 0; x < w.g.size(); ++x )
    w.g[x] = bits::compress( w.f_star.values[x] & w.kernel, w.kernel );
  w.never_empty = std::all_of( w.g.begin(), w.g.end(), []( Mask m ) { return m != 0; } );
  w.singleton_on_kernel = true;
  std::size_t idx = 0;
  bits::for_each( w.kernel, [&]( std::size_t d ) {
    w.singleton_on_kernel = w.singleton_on_kernel && w.g[d] == bits::single( idx );
    ++idx;
  } );
  if ( !w.certified() )
    throw certification_failure( "characterization witness for " + n.to_string() + " failed its certificate" );
  return w;
}

struct PullbackDiagonal
{
  Pullback pb;
  ContinuousMap g;
  ContinuousMap singleton;
  bool singleton_injective = false;
  bool singleton_continuous = false;
  bool diagonal_inside = false;
  /// Carrier equals { (x, k) : g(x) = {k} } extensionally.
  bool carrier_matches = false;

  bool passed() const noexcept { return singleton_injective && singleton_continuous && diagonal_inside && carrier_matches; }
};

/// Pullback of g : X -> P(D) and d -> {d} on the subspace D; the diagonal of D must lie inside.
inline PullbackDiagonal pullback_diagonal_check( const CharacterizationWitness& w )
{
  const auto& space = w.original.space();
  if ( w.g.size() != space.size() || w.kernel == 0 )
    throw input_error( "malformed characterization witness" );
  const std::size_t k = bits::count( w.kernel );
  const auto& puf = cached_puf_space( k );
  PullbackDiagonal r;
  r.g = ContinuousMap( space, puf.space, PointMap( w.g.begin(), w.g.end() ) );
  const auto sub = subspace( space, PointSet( space.size(), w.kernel ) );
  PointMap single( k );
  for ( std::size_t i = 0; i < k; ++i )
    single[i] = bits::single( i );
  r.singleton = ContinuousMap( sub.space, puf.space, single );
  r.singleton_injective = r.singleton.is_injective();
  r.singleton_continuous = r.singleton.certified();
  if ( !r.g.certified() || !r.singleton_continuous )
    return r;
  r.pb = pullback( r.g, r.singleton );
  r.diagonal_inside = true;
  for ( std::size_t i = 0; i < k; ++i )
  {
    const std::pair<std::size_t, std::size_t> diag{ sub.to_parent[i], i };
    r.diagonal_inside = r.diagonal_inside && std::find( r.pb.pairs.begin(), r.pb.pairs.end(), diag ) != r.pb.pairs.end();
  }
  std::vector<std::pair<std::size_t, std::size_t>> expected;
  for ( std::size_t x = 0; x < space.size(); ++x )
    for ( std::size_t i = 0; i < k; ++i )
      if ( w.g[x] == bits::single( i ) )
        expected.emplace_back( x, i );
  r.carrier_matches = expected == r.pb.pairs;
  return r;
}

struct DoublePuncture
{
  std::vector<Mask> refined;
  bool kernel_preserved = false;
  bool never_empty = false;
  bool singleton_on_kernel = false;
  bool refinement_open = false;
};

/*! \brief N**(d) = N*(d) minus (g(d) minus {d}) on D, g(d) = { a in D : d in N*(a) }.

  Reports whether the companion of N** traced onto D is a witness of the
  characterization. It need not be: d in N*(a) with a outside N*(d) survives.
*/
inline DoublePuncture double_puncture( const SetAssignment& n_star, const PointSet& d )
{
  require_neighborhood( n_star, "double_puncture" );
  const auto& space = n_star.space();
  space.require_universe( d );
  if ( !is_t1( space ) )
    throw precondition_violation( "double_puncture needs a T1 space" );
  if ( union_over( n_star.masks(), d.mask() ) != space.full_mask() )
    throw precondition_violation( "double_puncture: " + d.to_string() + " is not a kernel" );
  const auto f = companion_values( space, n_star.masks() );
  DoublePuncture r;
  r.refined = n_star.masks();
  bits::for_each( d.mask(), [&]( std::size_t x ) {
    const Mask g = f[x] & d.mask();
    r.refined[x] = n_star.mask( x ) & ~( g & ~bits::single( x ) );
  } );
  r.refinement_open = std::all_of( r.refined.begin(), r.refined.end(), [&]( Mask m ) { return space.is_open( m ); } );
  r.kernel_preserved = union_over( r.refined, d.mask() ) == space.full_mask();
  const auto f2 = companion_values( space, r.refined );
  r.never_empty = true;
  for ( std::size_t x = 0; x < space.size(); ++x )
    r.never_empty = r.never_empty && ( f2[x] & d.mask() ) != 0;
  r.singleton_on_kernel = true;
  bits::for_each( d.mask(), [&]( std::size_t x ) { r.singleton_on_kernel = r.singleton_on_kernel && ( f2[x] & d.mask() ) == bits::single( x ); } );
  return r;
}

struct ClosedImageReport
{
  DVerdict domain;
  DVerdict codomain;
  bool violation = false;
};

/// For a closed continuous surjection, a D domain must give a D codomain.
inline ClosedImageReport closed_image_transfer( const ContinuousMap& t, const DCheckOptions& opt = {} )
{
  require_certified( t, "closed_image_transfer" );
  if ( !t.is_surjective() )
    throw precondition_violation( "closed_image_transfer needs a surjective map" );
  if ( !t.is_closed_map() )
    throw precondition_violation( "closed_image_transfer needs a closed map" );
  ClosedImageReport r;
  r.domain = dspace_check( t.domain(), opt );
  r.codomain = dspace_check( t.codomain(), opt );
  r.violation = r.domain.status == DStatus::yes && r.codomain.status != DStatus::yes;
  return r;
}

} // namespace topoforge
