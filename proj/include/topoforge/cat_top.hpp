#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "continuous_map.hpp"
#include "errors.hpp"
#include "finite_space.hpp"
#include "point_set.hpp"
#include "puf.hpp"

namespace topoforge
{

inline void require_certified( const ContinuousMap& f, const char* what )
{
  if ( !f.certified() )
    throw precondition_violation( std::string( what ) + " needs a continuous map" );
}

/// Every space on at most two points (0, 1, and the four labeled topologies on 2 points).
inline const std::vector<FiniteSpace>& probe_spaces()
{
  static const std::vector<FiniteSpace> probes = [] {
    std::vector<FiniteSpace> p;
    p.push_back( FiniteSpace() );
    p.push_back( FiniteSpace::discrete( 1 ) );
    p.push_back( FiniteSpace::indiscrete( 2 ) );
    p.push_back( FiniteSpace::sierpinski() );
    p.push_back( FiniteSpace::from_opens( 2, std::vector<Mask>{ 0b00, 0b10, 0b11 } ) );
    p.push_back( FiniteSpace::discrete( 2 ) );
    return p;
  }();
  return probes;
}

struct MorphismReport
{
  bool concrete = false;
  bool categorical = false;

  bool agrees() const noexcept { return concrete == categorical; }
};

/// Injective, and f.g = f.h forces g = h for all probe pairs g, h : Z -> domain.
inline MorphismReport is_mono( const ContinuousMap& f )
{
  require_certified( f, "is_mono" );
  MorphismReport r;
  r.concrete = f.is_injective();
  r.categorical = true;
  for ( const auto& z : probe_spaces() )
  {
    const auto maps = continuous_maps( z, f.domain() );
    for ( std::size_t i = 0; i < maps.size() && r.categorical; ++i )
      for ( std::size_t j = i + 1; j < maps.size(); ++j )
        if ( compose( f, maps[i] ).values() == compose( f, maps[j] ).values() )
        {
          r.categorical = false;
          break;
        }
  }
  return r;
}

/// Surjective, and g.f = h.f forces g = h for all probe pairs g, h : codomain -> Z.
inline MorphismReport is_epi( const ContinuousMap& f )
{
  require_certified( f, "is_epi" );
  MorphismReport r;
  r.concrete = f.is_surjective();
  r.categorical = true;
  for ( const auto& z : probe_spaces() )
  {
    const auto maps = continuous_maps( f.codomain(), z );
    for ( std::size_t i = 0; i < maps.size() && r.categorical; ++i )
      for ( std::size_t j = i + 1; j < maps.size(); ++j )
        if ( compose( maps[i], f ).values() == compose( maps[j], f ).values() )
        {
          r.categorical = false;
          break;
        }
  }
  return r;
}

struct InitialTerminal
{
  FiniteSpace initial;
  FiniteSpace terminal;
  std::size_t maps_from_initial = 0;
  std::size_t maps_to_terminal = 0;

  bool certified() const noexcept { return maps_from_initial == 1 && maps_to_terminal == 1; }
};

/// The empty space and the one-point space, with map counts against a test space.
inline InitialTerminal initial_terminal( const FiniteSpace& test )
{
  InitialTerminal r;
  r.initial = FiniteSpace();
  r.terminal = FiniteSpace::discrete( 1 );
  r.maps_from_initial = continuous_maps( r.initial, test ).size();
  r.maps_to_terminal = continuous_maps( test, r.terminal ).size();
  return r;
}

/// Outcome of a universal-property check: every cone must have exactly one mediating map.
struct UmpCertificate
{
  std::size_t cones = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const noexcept { return failures == 0; }
};

/*! \brief Counts continuous u : Z -> P with u(z) in allowed[z], stopping at two.

  The candidates are the product of the allowed sets, so this is the number of
  mediating maps for a cone once the legs have been translated into fibers.
*/
inline std::size_t count_mediating( const FiniteSpace& z, const FiniteSpace& p, const std::vector<Mask>& allowed,
                                    PointMap* unique_out = nullptr )
{
  std::size_t found = 0;
  PointMap u( z.size() );
  auto rec = [&]( auto&& self, std::size_t i ) -> void {
    if ( found >= 2 )
      return;
    if ( i == z.size() )
    {
      if ( check_continuous( z, p, u ).continuous )
      {
        if ( found == 0 && unique_out )
          *unique_out = u;
        ++found;
      }
      return;
    }
    bits::for_each( allowed[i], [&]( std::size_t w ) {
      u[i] = w;
      self( self, i + 1 );
    } );
  };
  rec( rec, 0 );
  return found;
}

inline void record_cone( UmpCertificate& cert, std::size_t count, const std::string& label )
{
  ++cert.cones;
  if ( count != 1 )
  {
    ++cert.failures;
    if ( cert.first_failure.empty() )
      cert.first_failure = label + ": " + std::to_string( count ) + " mediating maps";
  }
}

struct Product
{
  FiniteSpace space;
  ContinuousMap pi1;
  ContinuousMap pi2;
  std::size_t left_size = 0;
  std::size_t right_size = 0;

  std::size_t index( std::size_t a, std::size_t b ) const noexcept { return a * right_size + b; }
};

/// Carrier = pairs in row-major order; topology generated by the rectangles U x V.
inline Product product( const FiniteSpace& a, const FiniteSpace& b )
{
  const std::size_t n = a.size() * b.size();
  if ( n > max_universe )
    throw resource_error( "product has " + std::to_string( n ) + " points, more than 64" );
  Product p;
  p.left_size = a.size();
  p.right_size = b.size();
  std::vector<PointSet> rectangles;
  for ( auto u : a.open_masks() )
    for ( auto v : b.open_masks() )
    {
      Mask r = 0;
      bits::for_each( u, [&]( std::size_t i ) { bits::for_each( v, [&]( std::size_t j ) { r |= bits::single( p.index( i, j ) ); } ); } );
      rectangles.emplace_back( n, r );
    }
  p.space = generate_topology( n, rectangles );
  PointMap v1( n ), v2( n );
  for ( std::size_t i = 0; i < a.size(); ++i )
    for ( std::size_t j = 0; j < b.size(); ++j )
    {
      v1[p.index( i, j )] = i;
      v2[p.index( i, j )] = j;
    }
  p.pi1 = ContinuousMap( p.space, a, std::move( v1 ) );
  p.pi2 = ContinuousMap( p.space, b, std::move( v2 ) );
  return p;
}

/// Every probe cone (p, q) plus the product's own cone factors through exactly one map.
inline UmpCertificate product_ump( const Product& p )
{
  UmpCertificate cert;
  const auto& a = p.pi1.codomain();
  const auto& b = p.pi2.codomain();
  auto check = [&]( const FiniteSpace& z, const PointMap& l, const PointMap& r, const std::string& label ) {
    std::vector<Mask> allowed( z.size() );
    for ( std::size_t i = 0; i < z.size(); ++i )
      allowed[i] = bits::single( p.index( l[i], r[i] ) );
    record_cone( cert, count_mediating( z, p.space, allowed ), label );
  };
  for ( const auto& z : probe_spaces() )
    for ( const auto& l : continuous_maps( z, a ) )
      for ( const auto& r : continuous_maps( z, b ) )
        check( z, l.values(), r.values(), "product probe cone on " + z.to_string() );
  check( p.space, p.pi1.values(), p.pi2.values(), "product own cone" );
  if ( !p.pi1.certified() || !p.pi2.certified() )
  {
    ++cert.failures;
    cert.first_failure = "projection not continuous";
  }
  return cert;
}

struct Equalizer
{
  FiniteSpace space;
  ContinuousMap inclusion;
  Mask carrier = 0;
};

/// Carrier { x : f(x) = g(x) } in increasing order, with the subspace topology.
inline Equalizer equalizer( const ContinuousMap& f, const ContinuousMap& g )
{
  if ( !( f.domain() == g.domain() ) || !( f.codomain() == g.codomain() ) )
    throw input_error( "equalizer needs parallel maps" );
  require_certified( f, "equalizer" );
  require_certified( g, "equalizer" );
  Equalizer e;
  for ( std::size_t x = 0; x < f.domain().size(); ++x )
    if ( f( x ) == g( x ) )
      e.carrier |= bits::single( x );
  const auto sub = subspace( f.domain(), PointSet( f.domain().size(), e.carrier ) );
  e.space = sub.space;
  e.inclusion = ContinuousMap( e.space, f.domain(), PointMap( sub.to_parent.begin(), sub.to_parent.end() ) );
  return e;
}

inline UmpCertificate equalizer_ump( const Equalizer& e, const ContinuousMap& f, const ContinuousMap& g )
{
  UmpCertificate cert;
  auto check = [&]( const FiniteSpace& z, const PointMap& leg, const std::string& label ) {
    std::vector<Mask> allowed( z.size(), 0 );
    for ( std::size_t i = 0; i < z.size(); ++i )
      for ( std::size_t w = 0; w < e.space.size(); ++w )
        if ( e.inclusion( w ) == leg[i] )
          allowed[i] |= bits::single( w );
    record_cone( cert, count_mediating( z, e.space, allowed ), label );
  };
  for ( const auto& z : probe_spaces() )
    for ( const auto& h : continuous_maps( z, f.domain() ) )
      if ( compose( f, h ).values() == compose( g, h ).values() )
        check( z, h.values(), "equalizer probe cone on " + z.to_string() );
  check( e.space, e.inclusion.values(), "equalizer own cone" );
  if ( !e.inclusion.certified() )
  {
    ++cert.failures;
    cert.first_failure = "inclusion not continuous";
  }
  return cert;
}

struct Pullback
{
  Product ambient;
  Equalizer eq;
  FiniteSpace space;
  ContinuousMap p1;
  ContinuousMap p2;
  /// (a, b) for each carrier point, in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Equalizer of f.pi_A and g.pi_B inside A x B.
inline Pullback pullback( const ContinuousMap& f, const ContinuousMap& g )
{
  if ( !( f.codomain() == g.codomain() ) )
    throw input_error( "pullback needs maps with a common codomain" );
  require_certified( f, "pullback" );
  require_certified( g, "pullback" );
  Pullback pb;
  pb.ambient = product( f.domain(), g.domain() );
  pb.eq = equalizer( compose( f, pb.ambient.pi1 ), compose( g, pb.ambient.pi2 ) );
  pb.space = pb.eq.space;
  pb.p1 = compose( pb.ambient.pi1, pb.eq.inclusion );
  pb.p2 = compose( pb.ambient.pi2, pb.eq.inclusion );
  for ( std::size_t w = 0; w < pb.space.size(); ++w )
    pb.pairs.emplace_back( pb.p1( w ), pb.p2( w ) );
  return pb;
}

inline UmpCertificate pullback_ump( const Pullback& pb, const ContinuousMap& f, const ContinuousMap& g )
{
  UmpCertificate cert;
  auto check = [&]( const FiniteSpace& z, const PointMap& l, const PointMap& r, const std::string& label ) {
    std::vector<Mask> allowed( z.size(), 0 );
    for ( std::size_t i = 0; i < z.size(); ++i )
      for ( std::size_t w = 0; w < pb.space.size(); ++w )
        if ( pb.pairs[w].first == l[i] && pb.pairs[w].second == r[i] )
          allowed[i] |= bits::single( w );
    record_cone( cert, count_mediating( z, pb.space, allowed ), label );
  };
  for ( const auto& z : probe_spaces() )
  {
    const auto left = continuous_maps( z, f.domain() );
    const auto right = continuous_maps( z, g.domain() );
    for ( const auto& l : left )
      for ( const auto& r : right )
        if ( compose( f, l ).values() == compose( g, r ).values() )
          check( z, l.values(), r.values(), "pullback probe cone on " + z.to_string() );
  }
  check( pb.space, pb.p1.values(), pb.p2.values(), "pullback own cone" );
  if ( compose( f, pb.p1 ).values() != compose( g, pb.p2 ).values() )
  {
    ++cert.failures;
    cert.first_failure = "pullback square does not commute";
  }
  return cert;
}

/// m . f = h, all three continuous.
inline bool coslice_commute( const ContinuousMap& f, const ContinuousMap& h, const ContinuousMap& m )
{
  if ( !( f.domain() == h.domain() ) || !( f.codomain() == m.domain() ) || !( m.codomain() == h.codomain() ) )
    throw input_error( "coslice triangle shapes do not match" );
  require_certified( f, "coslice_commute" );
  require_certified( h, "coslice_commute" );
  require_certified( m, "coslice_commute" );
  return compose( m, f ).values() == h.values();
}

/// R on P(A) with R(f(x)) = f*(x) on the image of f and R(B) = B elsewhere.
struct ShrinkMorphism
{
  PointMap values;
  /// Two points with equal f but different f*.
  bool well_defined = true;
  bool shrinks = true;
  bool continuous = false;
  std::optional<ContinuousMap> map;
};

inline ShrinkMorphism shrink_morphism( std::size_t domain_size, const std::vector<Mask>& f, const std::vector<Mask>& f_star )
{
  if ( f.size() != f_star.size() )
    throw input_error( "shrink_morphism needs companion values over the same space" );
  require_power_set_cap( domain_size );
  const std::size_t points = power_set_size( domain_size );
  ShrinkMorphism r;
  r.values.resize( points );
  for ( std::size_t b = 0; b < points; ++b )
    r.values[b] = b;
  Mask assigned = 0;
  for ( std::size_t x = 0; x < f.size(); ++x )
  {
    if ( bits::has( assigned, f[x] ) && r.values[f[x]] != f_star[x] )
      r.well_defined = false;
    assigned |= bits::single( f[x] );
    r.values[f[x]] = f_star[x];
  }
  for ( std::size_t b = 0; b < points; ++b )
    r.shrinks = r.shrinks && bits::subset( r.values[b], b );
  const auto& puf = cached_puf_space( domain_size );
  r.map = ContinuousMap( puf.space, puf.space, r.values );
  r.continuous = r.map->certified();
  return r;
}

} // namespace topoforge
