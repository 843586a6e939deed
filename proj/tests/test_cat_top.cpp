#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include <topoforge/cat_top.hpp>

#include "oracles.hpp"

using namespace topoforge;

namespace
{

std::vector<FiniteSpace> spaces_up_to( std::size_t max_n )
{
  std::vector<FiniteSpace> out;
  for ( std::size_t n = 1; n <= max_n; ++n )
    for ( const auto& fam : oracle::all_topologies( n ) )
      out.push_back( FiniteSpace::from_opens( n, std::vector<Mask>( fam.begin(), fam.end() ) ) );
  return out;
}

/// Mono by definition, with test spaces drawn from the oracle enumeration rather than the probe list.
bool mono_oracle( const ContinuousMap& f )
{
  auto tests = spaces_up_to( 2 );
  tests.push_back( FiniteSpace() );
  for ( const auto& z : tests )
  {
    const auto maps = continuous_maps( z, f.domain() );
    for ( const auto& g : maps )
      for ( const auto& h : maps )
        if ( g.values() != h.values() && compose( f, g ).values() == compose( f, h ).values() )
          return false;
  }
  return true;
}

bool epi_oracle( const ContinuousMap& f )
{
  auto tests = spaces_up_to( 2 );
  tests.push_back( FiniteSpace() );
  for ( const auto& z : tests )
  {
    const auto maps = continuous_maps( f.codomain(), z );
    for ( const auto& g : maps )
      for ( const auto& h : maps )
        if ( g.values() != h.values() && compose( g, f ).values() == compose( h, f ).values() )
          return false;
  }
  return true;
}

/// Up-sets of the product specialization order, counted directly.
std::size_t product_upset_count( const FiniteSpace& a, const FiniteSpace& b )
{
  const std::size_t n = a.size() * b.size();
  std::size_t count = 0;
  for ( Mask u = 0; u < ( Mask{ 1 } << n ); ++u )
  {
    bool up = true;
    for ( std::size_t p = 0; p < n && up; ++p )
    {
      if ( !bits::has( u, p ) )
        continue;
      for ( std::size_t q = 0; q < n && up; ++q )
        if ( bits::has( a.minimal_neighborhood( p / b.size() ), q / b.size() ) &&
             bits::has( b.minimal_neighborhood( p % b.size() ), q % b.size() ) && !bits::has( u, q ) )
          up = false;
    }
    count += up ? 1 : 0;
  }
  return count;
}

} // namespace

TEST_CASE( "continuity examples", "[cat_top]" )
{
  const auto s = FiniteSpace::sierpinski();
  const ContinuousMap bad( s, FiniteSpace::discrete( 2 ), { 0, 1 } );
  CHECK_FALSE( bad.certified() );
  REQUIRE( bad.offending_open() );
  CHECK( bad.offending_open()->mask() == 0b10 );
  CHECK_THROWS_AS( ContinuousMap::certified_or_throw( s, FiniteSpace::discrete( 2 ), { 0, 1 } ), precondition_violation );
  CHECK( ContinuousMap( FiniteSpace::discrete( 2 ), s, { 0, 1 } ).certified() );
  CHECK( ContinuousMap( s, FiniteSpace::indiscrete( 2 ), { 1, 0 } ).certified() );
}

TEST_CASE( "mono and epi examples", "[cat_top]" )
{
  const auto s = FiniteSpace::sierpinski();
  auto r = is_mono( ContinuousMap( FiniteSpace::discrete( 2 ), s, { 0, 1 } ) );
  CHECK( r.concrete );
  CHECK( r.agrees() );
  r = is_mono( ContinuousMap( s, FiniteSpace::discrete( 1 ), { 0, 0 } ) );
  CHECK_FALSE( r.concrete );
  CHECK_FALSE( r.categorical );
  r = is_epi( ContinuousMap( FiniteSpace::discrete( 2 ), s, { 0, 1 } ) );
  CHECK( r.concrete );
  CHECK( r.categorical );
  r = is_epi( ContinuousMap( FiniteSpace::discrete( 1 ), s, { 1 } ) );
  CHECK_FALSE( r.concrete );
  CHECK( r.agrees() );
  CHECK_THROWS_AS( is_mono( ContinuousMap( s, FiniteSpace::discrete( 2 ), { 0, 1 } ) ), precondition_violation );
}

TEST_CASE( "mono and epi routes agree with each other and with the oracle", "[cat_top][property]" )
{
  const auto spaces = spaces_up_to( 3 );
  for ( const auto& a : spaces )
    for ( const auto& b : spaces )
    {
      if ( a.size() + b.size() > 5 )
        continue;
      for ( const auto& f : continuous_maps( a, b ) )
      {
        const auto m = is_mono( f );
        const auto e = is_epi( f );
        REQUIRE( m.agrees() );
        REQUIRE( e.agrees() );
        REQUIRE( m.categorical == mono_oracle( f ) );
        REQUIRE( e.categorical == epi_oracle( f ) );
      }
    }
}

TEST_CASE( "initial and terminal objects", "[cat_top]" )
{
  CHECK( continuous_maps( FiniteSpace::discrete( 1 ), FiniteSpace::sierpinski() ).size() == 2 );
  for ( const auto& s : spaces_up_to( 3 ) )
    REQUIRE( initial_terminal( s ).certified() );
  CHECK( initial_terminal( FiniteSpace() ).certified() );
}

TEST_CASE( "product examples", "[cat_top]" )
{
  const auto s = FiniteSpace::sierpinski();
  const auto ss = product( s, s );
  CHECK( ss.space.size() == 4 );
  CHECK( ss.space.open_count() == 6 );
  CHECK( product_ump( ss ).passed() );
  CHECK( ss.index( 1, 0 ) == 2 );

  const auto d = product( FiniteSpace::discrete( 2 ), FiniteSpace::discrete( 2 ) );
  CHECK( d.space == FiniteSpace::discrete( 4 ) );
  CHECK( product( FiniteSpace::indiscrete( 2 ), FiniteSpace::indiscrete( 2 ) ).space == FiniteSpace::indiscrete( 4 ) );
}

TEST_CASE( "products match the up-set oracle and have the universal property", "[cat_top][property]" )
{
  const auto spaces = spaces_up_to( 3 );
  for ( const auto& a : spaces )
    for ( const auto& b : spaces )
    {
      if ( a.size() * b.size() > 6 )
        continue;
      const auto p = product( a, b );
      REQUIRE( p.space.open_count() == product_upset_count( a, b ) );
      if ( a.size() * b.size() <= 4 )
        REQUIRE( product_ump( p ).passed() );
    }
  for ( const auto& x : spaces )
    REQUIRE( product( x, FiniteSpace::discrete( 1 ) ).space == x );
}

TEST_CASE( "equalizer examples", "[cat_top]" )
{
  const auto s = FiniteSpace::sierpinski();
  const auto id = ContinuousMap::identity( s );
  auto e = equalizer( id, id );
  CHECK( e.carrier == 0b11 );
  CHECK( e.space == s );
  CHECK( equalizer_ump( e, id, id ).passed() );

  const ContinuousMap c0( s, s, { 1, 1 } );
  e = equalizer( id, c0 );
  CHECK( e.carrier == 0b10 );
  CHECK( e.space.size() == 1 );
  CHECK( equalizer_ump( e, id, c0 ).passed() );

  const ContinuousMap swap( FiniteSpace::discrete( 2 ), FiniteSpace::discrete( 2 ), { 1, 0 } );
  e = equalizer( ContinuousMap::identity( FiniteSpace::discrete( 2 ) ), swap );
  CHECK( e.carrier == 0 );
  CHECK( e.space.size() == 0 );
  CHECK( equalizer_ump( e, ContinuousMap::identity( FiniteSpace::discrete( 2 ) ), swap ).passed() );

  CHECK_THROWS_AS( equalizer( id, ContinuousMap::identity( FiniteSpace::discrete( 2 ) ) ), input_error );
}

TEST_CASE( "equalizers have the universal property for n <= 3", "[cat_top][property]" )
{
  for ( const auto& a : spaces_up_to( 3 ) )
    for ( const auto& b : spaces_up_to( 2 ) )
    {
      const auto maps = continuous_maps( a, b );
      for ( const auto& f : maps )
        for ( const auto& g : maps )
        {
          const auto e = equalizer( f, g );
          for ( std::size_t w = 0; w < e.space.size(); ++w )
            REQUIRE( f( e.inclusion( w ) ) == g( e.inclusion( w ) ) );
          REQUIRE( equalizer_ump( e, f, g ).passed() );
        }
    }
}

TEST_CASE( "pullback examples", "[cat_top]" )
{
  const auto s = FiniteSpace::sierpinski();
  const auto id = ContinuousMap::identity( s );
  auto pb = pullback( id, id );
  CHECK( pb.pairs == std::vector<std::pair<std::size_t, std::size_t>>{ { 0, 0 }, { 1, 1 } } );
  CHECK( pb.space == s );
  CHECK( pullback_ump( pb, id, id ).passed() );

  const ContinuousMap to_top( FiniteSpace::discrete( 1 ), s, { 1 } );
  pb = pullback( id, to_top );
  CHECK( pb.pairs == std::vector<std::pair<std::size_t, std::size_t>>{ { 1, 0 } } );
  CHECK( pullback_ump( pb, id, to_top ).passed() );

  const ContinuousMap collapse( s, s, { 1, 1 } );
  pb = pullback( collapse, id );
  CHECK( pb.pairs == std::vector<std::pair<std::size_t, std::size_t>>{ { 0, 1 }, { 1, 1 } } );
  CHECK( pullback_ump( pb, collapse, id ).passed() );

  CHECK_THROWS_AS( pullback( id, ContinuousMap::identity( FiniteSpace::discrete( 2 ) ) ), input_error );
}

TEST_CASE( "pullbacks have the universal property for small spaces", "[cat_top][property]" )
{
  const auto spaces = spaces_up_to( 2 );
  for ( const auto& a : spaces )
    for ( const auto& b : spaces )
      for ( const auto& c : spaces )
        for ( const auto& f : continuous_maps( a, c ) )
          for ( const auto& g : continuous_maps( b, c ) )
          {
            const auto pb = pullback( f, g );
            std::size_t fibre = 0;
            for ( std::size_t x = 0; x < a.size(); ++x )
              for ( std::size_t y = 0; y < b.size(); ++y )
                fibre += f( x ) == g( y ) ? 1 : 0;
            REQUIRE( pb.space.size() == fibre );
            REQUIRE( pullback_ump( pb, f, g ).passed() );
          }
}

TEST_CASE( "coslice triangles", "[cat_top]" )
{
  const auto s = FiniteSpace::sierpinski();
  const ContinuousMap f( FiniteSpace::discrete( 1 ), s, { 1 } );
  const ContinuousMap h( FiniteSpace::discrete( 1 ), FiniteSpace::discrete( 1 ), { 0 } );
  const ContinuousMap m( s, FiniteSpace::discrete( 1 ), { 0, 0 } );
  CHECK( coslice_commute( f, h, m ) );
  CHECK( coslice_commute( f, f, ContinuousMap::identity( s ) ) );
  CHECK_FALSE( coslice_commute( f, ContinuousMap( FiniteSpace::discrete( 1 ), s, { 0 } ), ContinuousMap::identity( s ) ) );
  CHECK_THROWS_AS( coslice_commute( f, f, m ), input_error );
}

TEST_CASE( "shrink morphism examples", "[cat_top]" )
{
  auto r = shrink_morphism( 1, { 0b1 }, { 0b1 } );
  CHECK( r.well_defined );
  CHECK( r.shrinks );
  CHECK( r.continuous );

  r = shrink_morphism( 2, { 0b11, 0b11 }, { 0b01, 0b10 } );
  CHECK_FALSE( r.well_defined );

  r = shrink_morphism( 2, { 0b11, 0b10 }, { 0b01, 0b10 } );
  CHECK( r.well_defined );
  CHECK( r.shrinks );
  CHECK( r.values[3] == 1 );

  CHECK_THROWS_AS( shrink_morphism( 2, { 0b11 }, { 0b01, 0b10 } ), input_error );
}

TEST_CASE( "the power-set lift is a functor on small spaces", "[cat_top][property]" )
{
  const auto spaces = spaces_up_to( 2 );
  for ( const auto& a : spaces )
    for ( const auto& b : spaces )
      for ( const auto& c : spaces )
        for ( const auto& t1 : continuous_maps( a, b ) )
          for ( const auto& t2 : continuous_maps( b, c ) )
            REQUIRE( functor_check( t1, t2 ).all() );
}
