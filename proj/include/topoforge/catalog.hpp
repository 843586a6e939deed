#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "covering.hpp"
#include "dspace.hpp"

namespace topoforge
{

enum class EnumerationMode
{
  labeled,
  unlabeled
};

inline std::size_t enumeration_cap()
{
  return 5;
}

/*! \brief Every topology on n points, as its family of minimal neighborhoods.

  Backtracking over N(0), N(1), ...: N(x) must contain x, and whenever y is in N(x) the
  choices must satisfy N(y) within N(x). Both directions are checked as soon as the
  second of the pair is placed, so inconsistent branches die early.
*/
inline void for_each_topology( std::size_t n, const std::function<void( const FiniteSpace& )>& fn,
                               std::size_t cap = enumeration_cap() )
{
  if ( n > cap )
    throw resource_error( "enumeration is capped at n = " + std::to_string( cap ) + ", got " + std::to_string( n ) );
  if ( n == 0 )
  {
    fn( FiniteSpace() );
    return;
  }
  const Mask full = bits::full( n );
  std::vector<Mask> minimal( n );
  auto rec = [&]( auto&& self, std::size_t x ) -> void {
    if ( x == n )
    {
      fn( space_from_minimal_neighborhoods( n, minimal ) );
      return;
    }
    const Mask self_bit = bits::single( x );
    const Mask rest = full & ~self_bit;
    for ( Mask extra = 0;; extra = ( extra - rest ) & rest )
    {
      const Mask nx = extra | self_bit;
      bool ok = true;
      for ( std::size_t y = 0; y < x && ok; ++y )
      {
        if ( bits::has( nx, y ) && !bits::subset( minimal[y], nx ) )
          ok = false;
        if ( bits::has( minimal[y], x ) && !bits::subset( nx, minimal[y] ) )
          ok = false;
      }
      if ( ok )
      {
        minimal[x] = nx;
        self( self, x + 1 );
      }
      if ( extra == rest )
        break;
    }
  };
  rec( rec, 0 );
}

/// Opens of `space` after moving point x to perm[x], sorted ascending.
inline std::vector<Mask> relabeled_opens( const FiniteSpace& space, const std::vector<std::size_t>& perm )
{
  std::vector<Mask> out;
  out.reserve( space.open_count() );
  for ( auto u : space.open_masks() )
  {
    Mask v = 0;
    bits::for_each( u, [&]( std::size_t x ) { v |= bits::single( perm[x] ); } );
    out.push_back( v );
  }
  std::sort( out.begin(), out.end() );
  return out;
}

/// Lexicographically least sorted opens encoding over all relabelings.
inline std::vector<Mask> canonical_encoding( const FiniteSpace& space )
{
  std::vector<std::size_t> perm( space.size() );
  std::iota( perm.begin(), perm.end(), std::size_t{ 0 } );
  std::vector<Mask> best = relabeled_opens( space, perm );
  while ( std::next_permutation( perm.begin(), perm.end() ) )
    best = std::min( best, relabeled_opens( space, perm ) );
  return best;
}

inline FiniteSpace canonical_form( const FiniteSpace& space )
{
  if ( space.size() == 0 )
    return space;
  return FiniteSpace::from_opens( space.size(), canonical_encoding( space ) );
}

/// FNV-1a over n and the canonical encoding; stable across platforms and runs.
inline std::uint64_t canonical_hash( const FiniteSpace& space )
{
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&]( std::uint64_t v ) {
    for ( int i = 0; i < 8; ++i )
    {
      h ^= ( v >> ( 8 * i ) ) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix( space.size() );
  for ( auto m : canonical_encoding( space ) )
    mix( m );
  return h;
}

/// A bijection perm with perm(opens of a) = opens of b, if one exists.
inline std::optional<std::vector<std::size_t>> find_homeomorphism( const FiniteSpace& a, const FiniteSpace& b )
{
  if ( a.size() != b.size() || a.open_count() != b.open_count() )
    return std::nullopt;
  std::vector<Mask> target( b.open_masks().begin(), b.open_masks().end() );
  std::sort( target.begin(), target.end() );
  std::vector<std::size_t> perm( a.size() );
  std::iota( perm.begin(), perm.end(), std::size_t{ 0 } );
  do
  {
    if ( relabeled_opens( a, perm ) == target )
      return perm;
  } while ( std::next_permutation( perm.begin(), perm.end() ) );
  return std::nullopt;
}

/*! \brief Labeled mode: every topology once, in backtracking order. Unlabeled mode: one
  canonical representative per relabeling class, sorted by canonical encoding.
*/
inline std::vector<FiniteSpace> enumerate_topologies( std::size_t n, EnumerationMode mode,
                                                      std::size_t cap = enumeration_cap() )
{
  std::vector<FiniteSpace> out;
  if ( mode == EnumerationMode::labeled )
  {
    for_each_topology( n, [&]( const FiniteSpace& s ) { out.push_back( s ); }, cap );
    return out;
  }
  std::set<std::vector<Mask>> classes;
  for_each_topology( n, [&]( const FiniteSpace& s ) { classes.insert( canonical_encoding( s ) ); }, cap );
  for ( const auto& enc : classes )
    out.push_back( n == 0 ? FiniteSpace() : FiniteSpace::from_opens( n, enc ) );
  return out;
}

struct FingerprintBudget
{
  /// D checks with more neighborhood assignments than this are sampled.
  std::uint64_t d_cap = 1'000'000;
  std::size_t d_samples = 2000;
  std::uint64_t seed = 0;
  std::size_t gls_cap = topoforge::gls_cap();
  std::size_t left_separated_cap = topoforge::left_separated_cap();
  std::size_t lindelof_quantifier_cap = 6;
};

struct Fingerprint
{
  bool t0 = false;
  bool t1 = false;
  std::size_t extent = 0;
  std::size_t lindelof = 0;
  std::size_t exclusiveness = 0;
  DStatus d = DStatus::unknown_sampled;
  std::uint64_t d_checked = 0;
  std::uint64_t d_total = 0;
  bool ad = false;
  /// Empty when the space is above the search cap.
  std::optional<bool> gls;
  std::optional<bool> left_separated;
  std::size_t open_count = 0;

  friend bool operator==( const Fingerprint&, const Fingerprint& ) = default;
};

struct CatalogRecord
{
  FiniteSpace space;
  std::uint64_t canonical_hash = 0;
  Fingerprint fingerprint;
  std::optional<std::vector<Mask>> d_counterexample;
  std::optional<std::vector<Mask>> gls_witness;
  std::optional<std::vector<std::size_t>> order_witness;

  /// e <= L, and e = L when D holds.
  bool invariants_hold() const noexcept
  {
    const auto& f = fingerprint;
    return f.extent <= f.lindelof && ( f.d != DStatus::yes || f.extent == f.lindelof );
  }
};

inline CatalogRecord fingerprint( const FiniteSpace& space, const FingerprintBudget& budget = {} )
{
  CatalogRecord r;
  r.space = space;
  r.canonical_hash = canonical_hash( space );
  auto& f = r.fingerprint;
  const auto sep = separation_level( space );
  f.t0 = sep.t0;
  f.t1 = sep.t1;
  f.extent = extent( space );
  const auto l = lindelof_degree( space, budget.lindelof_quantifier_cap );
  if ( !l.agrees() )
    throw certification_failure( "Lindelof routes disagree on " + space.to_string() );
  f.lindelof = l.degree;
  const auto ex = exclusiveness( space );
  if ( !ex.agrees() )
    throw certification_failure( "exclusiveness routes disagree on " + space.to_string() );
  f.exclusiveness = ex.value();
  const auto d = dspace_check( space, { .cap = budget.d_cap, .seed = budget.seed, .samples = budget.d_samples } );
  f.d = d.status;
  f.d_checked = d.assignments_checked;
  f.d_total = d.assignments_total;
  r.d_counterexample = d.counterexample;
  f.ad = is_aD( space );
  if ( space.size() <= budget.gls_cap )
  {
    const auto g = gls_search( space, budget.gls_cap );
    f.gls = g.has_value();
    if ( g )
      r.gls_witness = g->up;
  }
  if ( space.size() <= budget.left_separated_cap )
  {
    r.order_witness = left_separated_search( space, budget.left_separated_cap );
    f.left_separated = r.order_witness.has_value();
  }
  f.open_count = space.open_count();
  return r;
}

/// Fingerprints in input order; work is split over `jobs` threads.
inline std::vector<CatalogRecord> fingerprint_all( const std::vector<FiniteSpace>& spaces, const FingerprintBudget& budget,
                                                   std::size_t jobs = 1 )
{
  std::vector<CatalogRecord> out( spaces.size() );
  jobs = std::max<std::size_t>( 1, std::min( jobs, spaces.size() ) );
  if ( jobs == 1 )
  {
    for ( std::size_t i = 0; i < spaces.size(); ++i )
      out[i] = fingerprint( spaces[i], budget );
    return out;
  }
  std::vector<std::exception_ptr> errors( jobs );
  std::vector<std::thread> workers;
  for ( std::size_t j = 0; j < jobs; ++j )
    workers.emplace_back( [&, j] {
      try
      {
        for ( std::size_t i = j; i < spaces.size(); i += jobs )
          out[i] = fingerprint( spaces[i], budget );
      }
      catch ( ... )
      {
        errors[j] = std::current_exception();
      }
    } );
  for ( auto& w : workers )
    w.join();
  for ( auto& e : errors )
    if ( e )
      std::rethrow_exception( e );
  return out;
}

} // namespace topoforge
