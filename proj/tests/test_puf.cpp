#include <catch_amalgamated.hpp>

#include <vector>

#include <topoforge/puf.hpp>

#include "oracles.hpp"

using namespace topoforge;

TEST_CASE( "principal ultrafilter examples", "[puf]" )
{
  CHECK( principal_ultrafilter( 2, 0 ).members() == std::vector<std::size_t>{ 1, 3 } );
  CHECK( principal_ultrafilter( 2, 1 ).members() == std::vector<std::size_t>{ 2, 3 } );
  const auto u = principal_ultrafilter( 3, 2 );
  CHECK( u.size() == 4 );
  for ( auto code : u.members() )
    CHECK( ( code & 0b100 ) != 0 );
  CHECK_THROWS_AS( principal_ultrafilter( 2, 2 ), input_error );
}

TEST_CASE( "puf open counts match the antichain oracle", "[puf]" )
{
  const std::vector<std::size_t> expected{ 2, 3, 6, 20, 168 };
  for ( std::size_t n = 0; n <= 4; ++n )
  {
    const auto oracle_count = oracle::count_antichains( n );
    REQUIRE( oracle_count == expected[n] );
    const auto p = build_puf_space( n );
    CHECK( p.space.size() == ( std::size_t{ 1 } << n ) );
    CHECK( p.space.open_count() == oracle_count );
    CHECK( p.subbase.size() == n );
  }
}

TEST_CASE( "puf space equals the up-set oracle", "[puf]" )
{
  for ( std::size_t n = 1; n <= 4; ++n )
  {
    const auto p = build_puf_space( n );
    const auto up = upset_oracle( n );
    CHECK( p.space == up );
    for ( auto u : p.space.open_masks() )
      REQUIRE( p.is_open_family( u ) );
  }
  CHECK_THROWS_AS( upset_oracle( 5 ), resource_error );
}

TEST_CASE( "intersections of subbasic sets are principal filters", "[puf][property]" )
{
  for ( std::size_t n = 1; n <= 4; ++n )
    for ( Mask req = 0; req <= oracle::full( n ); ++req )
    {
      Mask inter = oracle::full( std::size_t{ 1 } << n );
      for ( std::size_t x = 0; x < n; ++x )
        if ( ( req >> x ) & 1u )
          inter &= principal_ultrafilter( n, x ).mask();
      Mask filter = 0;
      for ( Mask a = 0; a < ( Mask{ 1 } << n ); ++a )
        if ( ( a & req ) == req )
          filter |= Mask{ 1 } << a;
      REQUIRE( inter == filter );
      REQUIRE( principal_filter_mask( n, req ) == filter );
    }
}

TEST_CASE( "puf size cap", "[puf]" )
{
  CHECK_THROWS_AS( build_puf_space( universe_cap_bits() + 1 ), resource_error );
  CHECK_THROWS_WITH( build_puf_space( universe_cap_bits() + 1 ), Catch::Matchers::ContainsSubstring( "cap" ) );
}

TEST_CASE( "shrink map preimages", "[puf]" )
{
  const std::size_t n = 2;
  PowerSetMap identity{ 0, 1, 2, 3 };
  auto r = check_shrink_map( n, identity );
  CHECK( r.all_equal() );
  CHECK( r.continuous() );

  // R = constant empty set: preimages are empty, so the equality fails at every point.
  r = check_shrink_map( n, PowerSetMap{ 0, 0, 0, 0 } );
  CHECK_FALSE( r.all_equal() );
  CHECK( r.discrepancies() == std::vector<std::size_t>{ 0, 1 } );
  CHECK( r.continuous() );
  for ( const auto& p : r.points )
    CHECK( p.within_ultrafilter );

  // R(A) = A minus its largest element.
  PowerSetMap drop_largest( 4 );
  for ( std::size_t a = 0; a < 4; ++a )
    drop_largest[a] = a == 0 ? 0 : a & ~( std::size_t{ 1 } << ( 63 - __builtin_clzll( a ) ) );
  r = check_shrink_map( n, drop_largest );
  CHECK( r.points[0].preimage.members() == std::vector<std::size_t>{ 3 } );
  CHECK( r.points[1].preimage.is_empty() );
  CHECK( r.discrepancies() == std::vector<std::size_t>{ 0, 1 } );
  CHECK( r.continuous() );

  CHECK_THROWS_AS( check_shrink_map( n, PowerSetMap{ 1, 1, 2, 3 } ), precondition_violation );
  CHECK_THROWS_WITH( check_shrink_map( n, PowerSetMap{ 1, 1, 2, 3 } ), Catch::Matchers::ContainsSubstring( "{}" ) );
}

TEST_CASE( "shrink map preimage equality holds only for the identity", "[puf][property]" )
{
  for ( std::size_t n = 1; n <= 2; ++n )
  {
    const std::size_t points = std::size_t{ 1 } << n;
    // Every shrink map: each code a picks a sub-code.
    std::vector<std::vector<std::size_t>> choices( points );
    for ( std::size_t a = 0; a < points; ++a )
      for ( std::size_t b = 0; b < points; ++b )
        if ( ( b & ~a ) == 0 )
          choices[a].push_back( b );
    std::vector<std::size_t> idx( points, 0 );
    std::size_t shrink_maps = 0, discontinuous = 0;
    while ( true )
    {
      PowerSetMap r( points );
      bool is_identity = true;
      for ( std::size_t a = 0; a < points; ++a )
      {
        r[a] = choices[a][idx[a]];
        is_identity = is_identity && r[a] == a;
      }
      const auto rep = check_shrink_map( n, r );
      ++shrink_maps;
      discontinuous += !rep.continuous();
      REQUIRE( rep.all_equal() == is_identity );
      for ( const auto& p : rep.points )
        REQUIRE( p.within_ultrafilter );
      std::size_t i = 0;
      for ( ; i < points; ++i )
      {
        if ( ++idx[i] < choices[i].size() )
          break;
        idx[i] = 0;
      }
      if ( i == points )
        break;
    }
    CHECK( shrink_maps == ( n == 1 ? 2u : 16u ) );
    // R({0}) = {0}, R({0,1}) = {} already breaks continuity at n = 2.
    CHECK( ( discontinuous > 0 ) == ( n == 2 ) );
  }
}

TEST_CASE( "trace map examples", "[puf]" )
{
  auto t = trace_map( 2, PointSet( 2, { 0 } ) );
  CHECK( t.certified() );
  CHECK( preimage( t.map.values(), principal_ultrafilter( 1, 0 ).mask() ) == principal_ultrafilter( 2, 0 ).mask() );

  t = trace_map( 2, PointSet::full( 2 ) );
  CHECK( t.certified() );
  CHECK( t.map.values() == PointMap{ 0, 1, 2, 3 } );

  t = trace_map( 2, PointSet::empty( 2 ) );
  CHECK( t.certified() );
  CHECK( t.map.codomain().size() == 1 );
  CHECK( t.map.values() == PointMap{ 0, 0, 0, 0 } );

  CHECK_THROWS_AS( trace_map( 2, PointSet( 3, { 0 } ) ), input_error );
}

TEST_CASE( "image map examples", "[puf]" )
{
  auto img = image_map( 2, 1, PointMap{ 0, 0 } );
  CHECK( img.certified() );
  CHECK( preimage( img.map.values(), 0b10 ) == ( principal_ultrafilter( 2, 0 ) | principal_ultrafilter( 2, 1 ) ).mask() );

  img = image_map( 2, 2, PointMap{ 0, 1 } );
  CHECK( img.map.values() == PointMap{ 0, 1, 2, 3 } );

  img = image_map( 2, 2, PointMap{ 1, 0 } );
  CHECK( img.certified() );
  CHECK( img.map.values() == PointMap{ 0, 2, 1, 3 } );
  CHECK( img.map.is_injective() );
  CHECK( img.surjective );
}

TEST_CASE( "trace and image certificates hold exhaustively", "[puf][property]" )
{
  for ( std::size_t n = 0; n <= 3; ++n )
    for ( Mask d = 0; d <= oracle::full( n ); ++d )
      REQUIRE( trace_map( n, PointSet( n, d ) ).certified() );

  for ( std::size_t n = 0; n <= 3; ++n )
    for ( std::size_t m = 1; m <= 3; ++m )
      for_each_point_map( n, m, [&]( const PointMap& t ) {
        const auto img = image_map( n, m, t );
        REQUIRE( img.certified() );
        if ( img.point_map_surjective )
          REQUIRE( img.surjective );
      } );
}

TEST_CASE( "functor law examples", "[puf]" )
{
  const auto s = FiniteSpace::sierpinski();
  const auto id = ContinuousMap::identity( s );
  CHECK( functor_check( id, id ).all() );

  const auto d2 = FiniteSpace::discrete( 2 );
  const auto one = FiniteSpace::discrete( 1 );
  const ContinuousMap swap( d2, d2, PointMap{ 1, 0 } );
  const ContinuousMap to_point( d2, one, PointMap{ 0, 0 } );
  CHECK( functor_check( swap, to_point ).all() );

  const ContinuousMap inclusion( one, s, PointMap{ 1 } );
  const ContinuousMap collapse( s, one, PointMap{ 0, 0 } );
  CHECK( functor_check( inclusion, collapse ).all() );

  const ContinuousMap bad( s, d2, PointMap{ 0, 1 } );
  CHECK_FALSE( bad.certified() );
  CHECK_THROWS_AS( functor_check( bad, ContinuousMap::identity( d2 ) ), precondition_violation );
}
