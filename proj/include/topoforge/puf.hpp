#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "continuous_map.hpp"
#include "errors.hpp"
#include "finite_space.hpp"
#include "point_set.hpp"

namespace topoforge
{

/*
  Power-set points are integer codes: code A over a ground set of size n is a point of
  a space with 2^n points, and bit i of A means ground point i is a member of A.
*/

inline std::size_t power_set_size( std::size_t ground_size )
{
  return std::size_t{ 1 } << ground_size;
}

inline void require_power_set_cap( std::size_t ground_size )
{
  const auto cap = universe_cap_bits();
  if ( ground_size > cap )
    throw resource_error( "power set of a " + std::to_string( ground_size ) + "-point set exceeds the cap of " +
                          std::to_string( cap ) + " ground points (2^" + std::to_string( cap ) +
                          " power-set points; raise TOPOFORGE_CAP_BITS, max 6)" );
}

/// Codes with bit x set, as a mask over the 2^n power-set points.
inline Mask ultrafilter_mask( std::size_t n, std::size_t x ) noexcept
{
  Mask out = 0;
  for ( std::size_t code = 0; code < power_set_size( n ); ++code )
    if ( bits::has( code, x ) )
      out |= bits::single( code );
  return out;
}

/// U(x) = { A : x in A }.
inline PointSet principal_ultrafilter( std::size_t n, std::size_t x )
{
  if ( x >= n )
    throw input_error( "point " + std::to_string( x ) + " is not in a ground set of size " + std::to_string( n ) );
  require_power_set_cap( n );
  return PointSet( power_set_size( n ), ultrafilter_mask( n, x ) );
}

/// Principal filter { A : required is a subset of A }.
inline Mask principal_filter_mask( std::size_t n, Mask required ) noexcept
{
  Mask out = 0;
  for ( std::size_t code = 0; code < power_set_size( n ); ++code )
    if ( bits::subset( required, code ) )
      out |= bits::single( code );
  return out;
}

/// A family of power-set codes is upward closed under inclusion.
inline bool is_upward_closed( std::size_t n, Mask family ) noexcept
{
  bool ok = true;
  bits::for_each( family, [&]( std::size_t code ) {
    for ( std::size_t x = 0; x < n; ++x )
      ok = ok && bits::has( family, code | bits::single( x ) );
  } );
  return ok;
}

/*! \brief The puf topology on P(X): generated by the principal ultrafilters U(x).

  On a finite ground set its opens are exactly the upward-closed families; is_open on
  `space` is therefore the up-closure test.
*/
struct PufSpace
{
  std::size_t ground_size = 0;
  FiniteSpace space;
  std::vector<PointSet> subbase;

  bool is_open_family( Mask family ) const noexcept { return is_upward_closed( ground_size, family ); }
};

/// Ground size 0 gives the one-point space P(empty set).
inline PufSpace build_puf_space( std::size_t n )
{
  require_power_set_cap( n );
  PufSpace p;
  p.ground_size = n;
  for ( std::size_t x = 0; x < n; ++x )
    p.subbase.emplace_back( power_set_size( n ), ultrafilter_mask( n, x ) );
  p.space = generate_topology( power_set_size( n ), p.subbase );
  return p;
}

/// Memoized build_puf_space; the returned reference lives for the program.
inline const PufSpace& cached_puf_space( std::size_t n )
{
  require_power_set_cap( n );
  static std::mutex lock;
  static std::array<std::unique_ptr<PufSpace>, 7> cache;
  std::lock_guard guard( lock );
  if ( !cache[n] )
    cache[n] = std::make_unique<PufSpace>( build_puf_space( n ) );
  return *cache[n];
}

/*! \brief Independent route to the puf opens: test every family of subsets of X for
  upward closure. Needs 2^(2^n) candidates, so n <= 4.
*/
inline FiniteSpace upset_oracle( std::size_t n )
{
  if ( n > 4 )
    throw resource_error( "upset oracle enumerates 2^(2^n) families; n = " + std::to_string( n ) + " exceeds 4" );
  const std::size_t points = power_set_size( n );
  const std::uint64_t families = std::uint64_t{ 1 } << points;
  std::vector<Mask> opens;
  for ( std::uint64_t fam = 0; fam < families; ++fam )
  {
    bool up = true;
    for ( std::size_t a = 0; a < points && up; ++a )
    {
      if ( !bits::has( fam, a ) )
        continue;
      for ( std::size_t b = 0; b < points; ++b )
      {
        if ( bits::subset( a, b ) && !bits::has( fam, b ) )
        {
          up = false;
          break;
        }
      }
    }
    if ( up )
      opens.push_back( fam );
  }
  return FiniteSpace::from_opens( points, std::move( opens ) );
}

/// Self-map of P(X) on codes.
using PowerSetMap = std::vector<std::size_t>;

struct ShrinkPointReport
{
  std::size_t point = 0;
  PointSet preimage;
  bool equals_ultrafilter = false;
  bool within_ultrafilter = false;
  bool preimage_open = false;
};

/*! \brief Per-point comparison of R^{-1}(U(x)) with U(x) for a shrink map R.

  The inclusion R^{-1}(U(x)) within U(x) always holds for shrink maps; the reverse
  inclusion and continuity can fail (R = constant empty set is the smallest example),
  so each is reported separately instead of being assumed.
*/
struct ShrinkReport
{
  std::size_t ground_size = 0;
  std::vector<ShrinkPointReport> points;

  bool all_equal() const
  {
    for ( const auto& p : points )
      if ( !p.equals_ultrafilter )
        return false;
    return true;
  }

  bool continuous() const
  {
    for ( const auto& p : points )
      if ( !p.preimage_open )
        return false;
    return true;
  }

  std::vector<std::size_t> discrepancies() const
  {
    std::vector<std::size_t> out;
    for ( const auto& p : points )
      if ( !p.equals_ultrafilter )
        out.push_back( p.point );
    return out;
  }
};

inline ShrinkReport check_shrink_map( std::size_t n, const PowerSetMap& r )
{
  require_power_set_cap( n );
  const std::size_t points = power_set_size( n );
  if ( r.size() != points )
    throw input_error( "shrink map must be defined on all " + std::to_string( points ) + " codes" );
  std::string offending;
  for ( std::size_t a = 0; a < points; ++a )
  {
    if ( r[a] >= points || !bits::subset( r[a], a ) )
    {
      if ( !offending.empty() )
        offending += ", ";
      offending += PointSet( n, a ).to_string();
    }
  }
  if ( !offending.empty() )
    throw precondition_violation( "R(A) is not a subset of A for A in: " + offending );

  ShrinkReport report;
  report.ground_size = n;
  for ( std::size_t x = 0; x < n; ++x )
  {
    const Mask u = ultrafilter_mask( n, x );
    const Mask pre = preimage( r, u );
    ShrinkPointReport p;
    p.point = x;
    p.preimage = PointSet( points, pre );
    p.equals_ultrafilter = pre == u;
    p.within_ultrafilter = bits::subset( pre, u );
    p.preimage_open = is_upward_closed( n, pre );
    report.points.push_back( std::move( p ) );
  }
  return report;
}

/// S(A) = A intersected with D, re-indexed onto P(D), with its preimage certificate.
struct TraceMap
{
  PointSet subset;
  std::vector<std::size_t> subset_points;
  ContinuousMap map;
  /// For each d in D (by position): S^{-1}(U_D(d)) equals U_X(d).
  std::vector<bool> preimage_identity;

  bool certified() const
  {
    for ( bool b : preimage_identity )
      if ( !b )
        return false;
    return map.certified();
  }
};

inline TraceMap trace_map( std::size_t n, const PointSet& d )
{
  if ( d.universe() != n )
    throw input_error( "trace set " + d.to_string() + " has universe " + std::to_string( d.universe() ) +
                       ", expected " + std::to_string( n ) );
  const auto& source = cached_puf_space( n );
  const auto& target = cached_puf_space( d.size() );
  PointMap values( power_set_size( n ) );
  for ( std::size_t a = 0; a < values.size(); ++a )
    values[a] = bits::compress( a & d.mask(), d.mask() );
  TraceMap t;
  t.subset = d;
  t.subset_points = d.members();
  t.map = ContinuousMap( source.space, target.space, std::move( values ) );
  for ( std::size_t k = 0; k < t.subset_points.size(); ++k )
  {
    const Mask pre = preimage( t.map.values(), ultrafilter_mask( d.size(), k ) );
    t.preimage_identity.push_back( pre == ultrafilter_mask( n, t.subset_points[k] ) );
  }
  return t;
}

/// T(A) = t(A) for a point function t : X -> Y, with the fiber-union certificate.
struct ImageMap
{
  ContinuousMap map;
  /// For each y: T^{-1}(U_Y(y)) equals the union of U_X(x) over the fiber t^{-1}(y).
  std::vector<bool> fiber_identity;
  bool point_map_surjective = false;
  bool surjective = false;

  bool certified() const
  {
    for ( bool b : fiber_identity )
      if ( !b )
        return false;
    return map.certified();
  }
};

inline ImageMap image_map( std::size_t domain_size, std::size_t codomain_size, const PointMap& t )
{
  if ( t.size() != domain_size )
    throw input_error( "point function must have one value per domain point" );
  for ( auto v : t )
    if ( v >= codomain_size )
      throw input_error( "value " + std::to_string( v ) + " outside codomain of size " + std::to_string( codomain_size ) );
  const auto& source = cached_puf_space( domain_size );
  const auto& target = cached_puf_space( codomain_size );
  PointMap values( power_set_size( domain_size ) );
  for ( std::size_t a = 0; a < values.size(); ++a )
    values[a] = image( t, a );
  ImageMap out;
  out.map = ContinuousMap( source.space, target.space, std::move( values ) );
  out.point_map_surjective = image( t, bits::full( domain_size ) ) == bits::full( codomain_size );
  out.surjective = out.map.is_surjective();
  for ( std::size_t y = 0; y < codomain_size; ++y )
  {
    Mask fiber_union = 0;
    for ( std::size_t x = 0; x < domain_size; ++x )
      if ( t[x] == y )
        fiber_union |= ultrafilter_mask( domain_size, x );
    out.fiber_identity.push_back( preimage( out.map.values(), ultrafilter_mask( codomain_size, y ) ) == fiber_union );
  }
  return out;
}

/// The puf endofunctor on arrows: F(t) = T.
inline ContinuousMap puf_functor( const ContinuousMap& t )
{
  return image_map( t.domain().size(), t.codomain().size(), t.values() ).map;
}

struct FunctorReport
{
  bool identity_domain = false;
  bool identity_middle = false;
  bool identity_codomain = false;
  bool composition = false;
  bool images_continuous = false;

  bool all() const noexcept
  {
    return identity_domain && identity_middle && identity_codomain && composition && images_continuous;
  }
};

/// Extensional check of F(id) = id and F(t2 . t1) = F(t2) . F(t1).
inline FunctorReport functor_check( const ContinuousMap& t1, const ContinuousMap& t2 )
{
  if ( !t1.certified() || !t2.certified() )
    throw precondition_violation( "functor_check needs continuous input maps" );
  if ( !( t1.codomain() == t2.domain() ) )
    throw input_error( "functor_check needs composable maps" );
  auto identity_law = []( const FiniteSpace& s ) {
    const auto lifted = puf_functor( ContinuousMap::identity( s ) );
    for ( std::size_t a = 0; a < lifted.values().size(); ++a )
      if ( lifted.values()[a] != a )
        return false;
    return lifted.domain() == lifted.codomain();
  };
  FunctorReport r;
  r.identity_domain = identity_law( t1.domain() );
  r.identity_middle = identity_law( t1.codomain() );
  r.identity_codomain = identity_law( t2.codomain() );
  const auto f1 = puf_functor( t1 );
  const auto f2 = puf_functor( t2 );
  const auto f21 = puf_functor( compose( t2, t1 ) );
  r.images_continuous = f1.certified() && f2.certified() && f21.certified();
  r.composition = compose( f2, f1 ).values() == f21.values();
  return r;
}

} // namespace topoforge
