#include <catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include <topoforge/covering.hpp>
#include <topoforge/dspace.hpp>

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

/// Brute-force extent: every subset, closedness and discreteness from the open family.
std::size_t extent_oracle( const FiniteSpace& s )
{
  const std::set<Mask> opens( s.open_masks().begin(), s.open_masks().end() );
  std::size_t best = 0;
  for ( Mask d = 0; d <= s.full_mask(); ++d )
    if ( oracle::closed_in( s.size(), opens, d ) && oracle::discrete_by_all_opens( opens, d ) )
      best = std::max<std::size_t>( best, bits::count( d ) );
  return best;
}

} // namespace

TEST_CASE( "extent examples", "[covering]" )
{
  CHECK( extent( FiniteSpace::discrete( 3 ) ) == 3 );
  CHECK( extent( FiniteSpace::sierpinski() ) == 1 );
  CHECK( extent( FiniteSpace::indiscrete( 2 ) ) == 0 );
}

TEST_CASE( "Lindelof degree examples", "[covering]" )
{
  auto l = lindelof_degree( FiniteSpace::discrete( 3 ), 8 );
  CHECK( l.degree == 3 );
  CHECK( l.agrees() );
  l = lindelof_degree( FiniteSpace::sierpinski() );
  CHECK( l.degree == 1 );
  CHECK( l.quantifier_degree == 1u );
  l = lindelof_degree( FiniteSpace::indiscrete( 2 ) );
  CHECK( l.degree == 1 );
  CHECK( l.agrees() );
}

TEST_CASE( "Lindelof routes agree and extent matches its oracle", "[covering][property]" )
{
  for ( const auto& s : spaces_up_to( 4 ) )
  {
    const auto l = lindelof_degree( s, 8 );
    REQUIRE( l.agrees() );
    const auto e = extent( s );
    REQUIRE( e == extent_oracle( s ) );
    REQUIRE( e <= l.degree );
  }
}

TEST_CASE( "finiteness profile examples", "[covering]" )
{
  auto p = finiteness_profile( CoverFamily( FiniteSpace::discrete( 2 ), { 0b01, 0b10 } ) );
  CHECK( p.local_degree() == 1 );
  CHECK( p.membership == std::vector<std::size_t>{ 1, 1 } );

  p = finiteness_profile( CoverFamily( FiniteSpace::indiscrete( 2 ), { 0b11 } ) );
  CHECK( p.local_degree() == 1 );
  CHECK( p.point_degree() == 1 );

  p = finiteness_profile( CoverFamily( FiniteSpace::sierpinski(), { 0b01, 0b11 } ) );
  CHECK( p.membership == std::vector<std::size_t>{ 2, 1 } );

  CHECK_THROWS_AS( CoverFamily( FiniteSpace::sierpinski(), { 0b01 } ), input_error );
  CHECK_THROWS_AS( CoverFamily( FiniteSpace::sierpinski(), { 0b11, 0b11 } ), input_error );
}

TEST_CASE( "companion bound identity", "[covering]" )
{
  const auto s = FiniteSpace::sierpinski();
  const auto n = SetAssignment::neighborhoods( s, { 0b01, 0b11 } );
  CHECK( companion_bound_identity( SetAssignment::from_masks( s, { 0b01, 0b11 } ), n ) );

  const auto d = FiniteSpace::discrete( 3 );
  CHECK( companion_bound_identity( SetAssignment::from_masks( d, { 0b001, 0b010, 0b100 } ),
                                   SetAssignment::neighborhoods( d, { 0b001, 0b010, 0b100 } ) ) );
  const auto ind = FiniteSpace::indiscrete( 2 );
  CHECK( companion_bound_identity( SetAssignment::from_masks( ind, { 0b11 } ), SetAssignment::neighborhoods( ind, { 0b11, 0b11 } ) ) );
  CHECK_THROWS_AS( companion_bound_identity( SetAssignment::from_masks( s, { 0b01 } ), n ), precondition_violation );

  for ( const auto& sp : spaces_up_to( 3 ) )
    for ( std::size_t m = 1; m <= 2; ++m )
      for_each_set_assignment( sp, m, [&]( const std::vector<Mask>& sets ) {
        const auto o = SetAssignment::from_masks( sp, sets );
        if ( !o.is_covering() )
          return;
        for_each_neighborhood_assignment( sp, [&]( const std::vector<Mask>& nb ) {
          REQUIRE( companion_bound_identity( o, SetAssignment::neighborhoods( sp, nb ) ) );
        } );
      } );
}

TEST_CASE( "paracompact and metacompact witnesses", "[covering]" )
{
  const auto s = FiniteSpace::sierpinski();
  auto p = paracompact_witness( SetAssignment::from_masks( s, { 0b01, 0b11 } ) );
  CHECK( p.refined.masks() == std::vector<Mask>{ 0b01, 0b11 } );
  CHECK( p.neighborhoods.masks() == std::vector<Mask>{ 0b01, 0b11 } );
  CHECK( p.bound == 2 );

  const auto d2 = FiniteSpace::discrete( 2 );
  p = paracompact_witness( SetAssignment::from_masks( d2, { 0b01, 0b10 } ) );
  CHECK( p.bound == 1 );
  p = paracompact_witness( SetAssignment::from_masks( FiniteSpace::indiscrete( 2 ), { 0b11 } ) );
  CHECK( p.bound == 1 );

  CHECK( metacompact_witness( SetAssignment::from_masks( d2, { 0b01, 0b10 } ) ).degree == 1 );
  const auto m = metacompact_witness( SetAssignment::from_masks( s, { 0b01, 0b11 } ) );
  CHECK( m.degree == 1 );
  CHECK( m.refined.masks() == std::vector<Mask>{ 0b00, 0b11 } );
  CHECK( metacompact_degree_brute_force( SetAssignment::from_masks( s, { 0b01, 0b11 } ) ) == 1 );
  CHECK( metacompact_witness( SetAssignment::from_masks( FiniteSpace::indiscrete( 2 ), { 0b11 } ) ).degree == 1 );

  CHECK_THROWS_AS( paracompact_witness( SetAssignment::from_masks( s, { 0b01 } ) ), precondition_violation );
  CHECK_THROWS_AS( metacompact_witness( SetAssignment::from_masks( s, { 0b01 } ) ), precondition_violation );
}

TEST_CASE( "metacompact greedy never beats the brute-force minimum", "[covering][property]" )
{
  for ( const auto& sp : spaces_up_to( 3 ) )
    for ( std::size_t m = 1; m <= 3; ++m )
      for_each_set_assignment( sp, m, [&]( const std::vector<Mask>& sets ) {
        const auto c = SetAssignment::from_masks( sp, sets );
        if ( !c.is_covering() )
          return;
        const auto w = metacompact_witness( c );
        REQUIRE( w.refines );
        REQUIRE( w.covering );
        REQUIRE( w.degree >= metacompact_degree_brute_force( c ) );
        REQUIRE( w.degree >= 1 );
      } );
}

TEST_CASE( "exclusiveness examples and laws", "[covering]" )
{
  CHECK( exclusiveness( FiniteSpace::discrete( 3 ) ).value() == 3 );
  CHECK( exclusiveness( FiniteSpace::sierpinski() ).value() == 0 );
  CHECK( exclusiveness( FiniteSpace::indiscrete( 2 ) ).value() == 0 );

  for ( const auto& sp : spaces_up_to( 4 ) )
  {
    const auto e = exclusiveness( sp );
    REQUIRE( e.agrees() );
    REQUIRE( ( e.value() >= 1 ) == is_t1( sp ) );
    if ( is_t1( sp ) )
      REQUIRE( e.value() == sp.size() );
  }
}

TEST_CASE( "aD examples", "[covering]" )
{
  CHECK( is_aD( FiniteSpace::discrete( 3 ) ) );
  CHECK( is_aD( FiniteSpace::indiscrete( 2 ) ) );
  CHECK( is_aD( FiniteSpace::sierpinski() ) );
}

TEST_CASE( "GLS search examples", "[covering]" )
{
  auto r = gls_search( FiniteSpace::discrete( 2 ) );
  REQUIRE( r );
  CHECK( r->up == std::vector<Mask>{ 0b01, 0b10 } );

  r = gls_search( FiniteSpace::sierpinski() );
  REQUIRE( r );
  CHECK( r->up == std::vector<Mask>{ 0b01, 0b11 } );
  CHECK( r->related( 1, 0 ) );
  CHECK_FALSE( r->related( 0, 1 ) );

  CHECK_FALSE( gls_search( FiniteSpace::indiscrete( 2 ) ) );
  CHECK_THROWS_AS( gls_search( FiniteSpace::discrete( 5 ) ), resource_error );
}

TEST_CASE( "GLS search agrees with a search over all reflexive relations", "[covering][property]" )
{
  for ( const auto& sp : spaces_up_to( 3 ) )
  {
    const std::size_t n = sp.size();
    std::vector<std::pair<std::size_t, std::size_t>> offdiag;
    for ( std::size_t x = 0; x < n; ++x )
      for ( std::size_t y = 0; y < n; ++y )
        if ( x != y )
          offdiag.emplace_back( x, y );
    bool any = false;
    for ( Mask rel = 0; rel < ( Mask{ 1 } << offdiag.size() ) && !any; ++rel )
    {
      std::vector<Mask> up( n );
      for ( std::size_t x = 0; x < n; ++x )
        up[x] = bits::single( x );
      for ( std::size_t i = 0; i < offdiag.size(); ++i )
        if ( ( rel >> i ) & 1u )
          up[offdiag[i].first] |= bits::single( offdiag[i].second );
      bool ok = true;
      for ( auto u : up )
        ok = ok && sp.is_open( u );
      for ( Mask f = 1; f <= sp.full_mask() && ok; ++f )
      {
        if ( !sp.is_closed( f ) )
          continue;
        bool has_min = false;
        for ( std::size_t m = 0; m < n; ++m )
        {
          if ( !bits::has( f, m ) )
            continue;
          bool minimal = true;
          for ( std::size_t x = 0; x < n; ++x )
            if ( x != m && bits::has( f, x ) && bits::has( up[x], m ) )
              minimal = false;
          has_min = has_min || minimal;
        }
        ok = has_min;
      }
      any = ok;
    }
    REQUIRE( gls_search( sp ).has_value() == any );
  }
}

TEST_CASE( "left-separated search examples", "[covering]" )
{
  CHECK( left_separated_search( FiniteSpace::discrete( 3 ) ) == std::vector<std::size_t>{ 0, 1, 2 } );
  CHECK( left_separated_search( FiniteSpace::sierpinski() ) == std::vector<std::size_t>{ 1, 0 } );
  CHECK_FALSE( left_separated_search( FiniteSpace::indiscrete( 2 ) ) );
}

TEST_CASE( "left-separated implies GLS implies D", "[covering][property]" )
{
  for ( const auto& sp : spaces_up_to( 3 ) )
  {
    const auto order = left_separated_search( sp );
    const auto gls = gls_search( sp );
    if ( order )
    {
      REQUIRE( gls );
      REQUIRE( is_gls_relation( sp, order_relation( *order ).up ) );
    }
    if ( gls )
      REQUIRE( dspace_check( sp ).status == DStatus::yes );
  }
}

TEST_CASE( "D spaces have extent equal to Lindelof degree", "[covering][property]" )
{
  for ( const auto& sp : spaces_up_to( 4 ) )
    if ( dspace_check( sp ).status == DStatus::yes )
      REQUIRE( extent( sp ) == lindelof_degree( sp ).degree );
}
