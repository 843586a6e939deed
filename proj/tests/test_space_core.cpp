#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include <topoforge/finite_space.hpp>

#include "oracles.hpp"

using namespace topoforge;

namespace
{

std::set<Mask> as_set( const FiniteSpace& s )
{
  return { s.open_masks().begin(), s.open_masks().end() };
}

} // namespace

TEST_CASE( "point set algebra stays in one universe", "[space_core]" )
{
  const PointSet a( 4, { 0, 2 } );
  const PointSet b( 4, { 2, 3 } );
  CHECK( ( a | b ) == PointSet( 4, { 0, 2, 3 } ) );
  CHECK( ( a & b ) == PointSet( 4, { 2 } ) );
  CHECK( ( a - b ) == PointSet( 4, { 0 } ) );
  CHECK( a.complement() == PointSet( 4, { 1, 3 } ) );
  CHECK_THROWS_AS( a | PointSet( 3, { 0 } ), input_error );
  CHECK_THROWS_AS( PointSet( 3, { 3 } ), input_error );
  CHECK_THROWS_AS( PointSet( 65, Mask{ 0 } ), resource_error );
}

TEST_CASE( "generate_topology examples", "[space_core]" )
{
  auto discrete = generate_topology( 2, { PointSet( 2, { 0 } ), PointSet( 2, { 1 } ) } );
  CHECK( discrete.open_count() == 4 );

  auto indiscrete = generate_topology( 2, {} );
  CHECK( as_set( indiscrete ) == std::set<Mask>{ 0, 0b11 } );

  auto chain = generate_topology( 3, { PointSet( 3, { 0, 1 } ), PointSet( 3, { 1, 2 } ) } );
  const auto expected = oracle::fixpoint_topology( 3, { 0b011, 0b110 } );
  CHECK( expected == std::set<Mask>{ 0, 0b010, 0b011, 0b110, 0b111 } );
  CHECK( as_set( chain ) == expected );

  CHECK_THROWS_AS( generate_topology( 2, { PointSet( 3, { 0 } ) } ), input_error );
}

TEST_CASE( "generate_topology agrees with the fixpoint oracle on every subbase for n <= 3", "[space_core]" )
{
  for ( std::size_t n = 0; n <= 3; ++n )
  {
    const std::size_t subsets = std::size_t{ 1 } << n;
    for ( std::uint64_t fam = 0; fam < ( std::uint64_t{ 1 } << subsets ); ++fam )
    {
      std::vector<PointSet> subbase;
      std::vector<Mask> raw;
      for ( std::size_t m = 0; m < subsets; ++m )
        if ( ( fam >> m ) & 1u )
        {
          subbase.emplace_back( n, m );
          raw.push_back( m );
        }
      const auto space = generate_topology( n, subbase );
      REQUIRE( verify_axioms( n, space.open_masks() ).all() );
      REQUIRE( as_set( space ) == oracle::fixpoint_topology( n, raw ) );
    }
  }
}

TEST_CASE( "verify_axioms diagnoses malformed families", "[space_core]" )
{
  CHECK( verify_axioms( 2, FiniteSpace::discrete( 2 ).open_masks() ).all() );

  const std::vector<Mask> broken{ 0, 0b01, 0b10 };
  const auto r = verify_axioms( 2, broken );
  CHECK_FALSE( r.contains_full );
  CHECK_FALSE( r.union_closed );
  CHECK( r.contains_empty );
  CHECK( r.intersection_closed );

  const std::vector<Mask> sierpinski{ 0, 0b01, 0b11 };
  CHECK( verify_axioms( 2, sierpinski ).all() );

  CHECK_THROWS_AS( FiniteSpace::from_opens( 2, broken ), input_error );
  CHECK_THROWS_WITH( FiniteSpace::from_opens( 3, std::vector<Mask>{ 0, 0b001, 0b010, 0b111 } ),
                     Catch::Matchers::ContainsSubstring( "not closed under union" ) );
}

TEST_CASE( "classify_subset examples", "[space_core]" )
{
  const auto s = FiniteSpace::sierpinski();
  auto c = classify_subset( s, PointSet( 2, { 1 } ) );
  CHECK( c.is_closed );
  CHECK( c.is_discrete );
  CHECK( c.is_closed_discrete );

  c = classify_subset( s, PointSet( 2, { 0 } ) );
  CHECK_FALSE( c.is_closed );

  for ( const auto& space : { s, FiniteSpace::discrete( 3 ), FiniteSpace::indiscrete( 2 ) } )
  {
    c = classify_subset( space, PointSet::empty( space.size() ) );
    CHECK( c.is_closed );
    CHECK( c.is_discrete );
  }

  c = classify_subset( FiniteSpace::indiscrete( 2 ), PointSet( 2, { 0, 1 } ) );
  CHECK( c.is_closed );
  CHECK_FALSE( c.is_discrete );

  CHECK_THROWS_AS( classify_subset( s, PointSet( 3, { 0 } ) ), input_error );
}

TEST_CASE( "discreteness via minimal neighborhoods matches quantification over all opens", "[space_core]" )
{
  for ( std::size_t n = 1; n <= 3; ++n )
    for ( const auto& fam : oracle::all_topologies( n ) )
    {
      const auto space = FiniteSpace::from_opens( n, std::vector<Mask>( fam.begin(), fam.end() ) );
      for ( Mask m = 0; m <= bits::full( n ); ++m )
      {
        const auto c = classify_subset( space, PointSet( n, m ) );
        REQUIRE( c.is_discrete == oracle::discrete_by_all_opens( fam, m ) );
        REQUIRE( c.is_closed == oracle::closed_in( n, fam, m ) );
      }
    }
}

TEST_CASE( "subsets of closed discrete sets are closed discrete", "[space_core][property]" )
{
  for ( std::size_t n = 1; n <= 3; ++n )
    for ( const auto& fam : oracle::all_topologies( n ) )
    {
      const auto space = FiniteSpace::from_opens( n, std::vector<Mask>( fam.begin(), fam.end() ) );
      for ( Mask d = 0; d <= bits::full( n ); ++d )
      {
        if ( !classify_subset( space, PointSet( n, d ) ).is_closed_discrete )
          continue;
        for ( Mask f = d;; f = ( f - 1 ) & d )
        {
          REQUIRE( classify_subset( space, PointSet( n, f ) ).is_closed_discrete );
          if ( f == 0 )
            break;
        }
      }
    }
}

TEST_CASE( "closure examples and laws", "[space_core][property]" )
{
  const auto s = FiniteSpace::sierpinski();
  CHECK( closure( s, PointSet( 2, { 0 } ) ) == PointSet( 2, { 0, 1 } ) );
  CHECK( closure( s, PointSet( 2, { 1 } ) ) == PointSet( 2, { 1 } ) );
  CHECK( closure( s, s.points() ) == s.points() );

  for ( std::size_t n = 1; n <= 3; ++n )
    for ( const auto& fam : oracle::all_topologies( n ) )
    {
      const auto space = FiniteSpace::from_opens( n, std::vector<Mask>( fam.begin(), fam.end() ) );
      for ( Mask a = 0; a <= bits::full( n ); ++a )
      {
        const Mask ca = closure_mask( space, a );
        REQUIRE( bits::subset( a, ca ) );
        REQUIRE( closure_mask( space, ca ) == ca );
        REQUIRE( space.is_closed( ca ) );
        for ( Mask b = 0; b <= bits::full( n ); ++b )
          if ( bits::subset( a, b ) )
            REQUIRE( bits::subset( ca, closure_mask( space, b ) ) );
      }
    }
}

TEST_CASE( "separation_level examples", "[space_core]" )
{
  auto l = separation_level( FiniteSpace::discrete( 2 ) );
  CHECK( ( l.t0 && l.t1 ) );
  l = separation_level( FiniteSpace::indiscrete( 2 ) );
  CHECK( ( !l.t0 && !l.t1 ) );
  l = separation_level( FiniteSpace::sierpinski() );
  CHECK( ( l.t0 && !l.t1 ) );
}

TEST_CASE( "finite T1 spaces are discrete", "[space_core][property]" )
{
  for ( std::size_t n = 1; n <= 4; ++n )
    for ( const auto& fam : oracle::all_topologies( n ) )
    {
      const auto space = FiniteSpace::from_opens( n, std::vector<Mask>( fam.begin(), fam.end() ) );
      if ( is_t1( space ) )
        REQUIRE( space.open_count() == ( std::size_t{ 1 } << n ) );
    }
}

TEST_CASE( "subspace examples", "[space_core]" )
{
  CHECK( subspace( FiniteSpace::sierpinski(), PointSet( 2, { 1 } ) ).space == FiniteSpace::discrete( 1 ) );
  const auto sub = subspace( FiniteSpace::discrete( 3 ), PointSet( 3, { 0, 2 } ) );
  CHECK( sub.space == FiniteSpace::discrete( 2 ) );
  CHECK( sub.to_parent == std::vector<std::size_t>{ 0, 2 } );
  CHECK( subspace( FiniteSpace::indiscrete( 3 ), PointSet( 3, { 0, 1 } ) ).space == FiniteSpace::indiscrete( 2 ) );
  CHECK_THROWS_AS( subspace( FiniteSpace::discrete( 3 ), PointSet( 2, { 0 } ) ), input_error );
}

TEST_CASE( "subspace of a subspace is the subspace of the intersection", "[space_core][property]" )
{
  for ( std::size_t n = 1; n <= 3; ++n )
    for ( const auto& fam : oracle::all_topologies( n ) )
    {
      const auto space = FiniteSpace::from_opens( n, std::vector<Mask>( fam.begin(), fam.end() ) );
      for ( Mask a = 0; a <= bits::full( n ); ++a )
      {
        const auto outer = subspace( space, PointSet( n, a ) );
        for ( Mask b = 0; b <= bits::full( n ); ++b )
        {
          const Mask inner_in_outer = bits::compress( a & b, a );
          const auto nested = subspace( outer.space, PointSet( outer.space.size(), inner_in_outer ) );
          const auto direct = subspace( space, PointSet( n, a & b ) );
          REQUIRE( nested.space == direct.space );
          std::vector<std::size_t> translated;
          for ( auto i : nested.to_parent )
            translated.push_back( outer.to_parent[i] );
          REQUIRE( translated == direct.to_parent );
        }
      }
    }
}
