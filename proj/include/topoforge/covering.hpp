#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "errors.hpp"
#include "finite_space.hpp"
#include "point_set.hpp"

namespace topoforge
{

/// A duplicate-free family of opens whose union is the whole space.
class CoverFamily
{
public:
  CoverFamily( FiniteSpace space, std::vector<Mask> members ) : space_( std::move( space ) ), members_( std::move( members ) )
  {
    Mask u = 0;
    for ( std::size_t i = 0; i < members_.size(); ++i )
    {
      if ( !space_.is_open( members_[i] ) )
        throw input_error( "cover member " + std::to_string( i ) + " is not open" );
      for ( std::size_t j = 0; j < i; ++j )
        if ( members_[j] == members_[i] )
          throw input_error( "cover member " + std::to_string( i ) + " duplicates member " + std::to_string( j ) );
      u |= members_[i];
    }
    if ( u != space_.full_mask() )
      throw input_error( "family does not cover the space" );
  }

  const FiniteSpace& space() const noexcept { return space_; }
  const std::vector<Mask>& members() const noexcept { return members_; }

private:
  FiniteSpace space_;
  std::vector<Mask> members_;
};

/// Largest closed discrete subset.
inline std::size_t extent( const FiniteSpace& space )
{
  std::size_t best = 0;
  for ( Mask d = 0; d <= space.full_mask(); ++d )
    if ( bits::count( d ) > best && is_closed_discrete_mask( space, d ) )
      best = bits::count( d );
  return best;
}

/// Each member owns a point no other member covers.
inline bool is_irredundant( const std::vector<Mask>& family )
{
  for ( std::size_t i = 0; i < family.size(); ++i )
  {
    Mask others = 0;
    for ( std::size_t j = 0; j < family.size(); ++j )
      if ( j != i )
        others |= family[j];
    if ( ( family[i] & ~others ) == 0 )
      return false;
  }
  return true;
}

/// Calls fn(family) for every irredundant open cover, members in canonical open order.
template<typename Fn>
void for_each_irredundant_cover( const FiniteSpace& space, Fn&& fn )
{
  std::vector<Mask> opens;
  for ( auto u : space.open_masks() )
    if ( u != 0 )
      opens.push_back( u );
  std::vector<Mask> chosen;
  // An irredundant cover has at most n members, one private point each.
  auto rec = [&]( auto&& self, std::size_t start, Mask covered ) -> void {
    if ( covered == space.full_mask() )
    {
      if ( is_irredundant( chosen ) )
        fn( static_cast<const std::vector<Mask>&>( chosen ) );
      return;
    }
    if ( chosen.size() == space.size() )
      return;
    for ( std::size_t i = start; i < opens.size(); ++i )
    {
      if ( bits::subset( opens[i], covered ) )
        continue;
      chosen.push_back( opens[i] );
      self( self, i + 1, covered | opens[i] );
      chosen.pop_back();
    }
  };
  if ( space.size() == 0 )
  {
    fn( static_cast<const std::vector<Mask>&>( chosen ) );
    return;
  }
  rec( rec, 0, 0 );
}

struct LindelofResult
{
  std::size_t degree = 0;
  /// Set when the space has at most `quantifier_cap` opens.
  std::optional<std::size_t> quantifier_degree;

  bool agrees() const noexcept { return !quantifier_degree || *quantifier_degree == degree; }
};

/// max over all open covers of the smallest subcover size, straight from the definition.
inline std::size_t lindelof_by_quantifier( const FiniteSpace& space )
{
  const auto opens = space.open_masks();
  const std::size_t k = opens.size();
  if ( k > 20 )
    throw resource_error( "quantifier route enumerates 2^opens families; " + std::to_string( k ) + " opens is too many" );
  std::size_t worst = 0;
  for ( Mask fam = 0; fam < ( Mask{ 1 } << k ); ++fam )
  {
    Mask u = 0;
    bits::for_each( fam, [&]( std::size_t i ) { u |= opens[i]; } );
    if ( u != space.full_mask() )
      continue;
    std::size_t best = k + 1;
    for ( Mask sub = fam;; sub = ( sub - 1 ) & fam )
    {
      Mask su = 0;
      bits::for_each( sub, [&]( std::size_t i ) { su |= opens[i]; } );
      if ( su == space.full_mask() )
        best = std::min( best, bits::count( sub ) );
      if ( sub == 0 )
        break;
    }
    worst = std::max( worst, best );
  }
  return worst;
}

inline LindelofResult lindelof_degree( const FiniteSpace& space, std::size_t quantifier_cap = 6 )
{
  LindelofResult r;
  for_each_irredundant_cover( space, [&]( const std::vector<Mask>& c ) { r.degree = std::max( r.degree, c.size() ); } );
  if ( space.open_count() <= quantifier_cap )
    r.quantifier_degree = lindelof_by_quantifier( space );
  return r;
}

struct FinitenessProfile
{
  /// Per point: the witness neighborhood (the minimal one) and the members meeting it.
  std::vector<Mask> witness;
  std::vector<Mask> meeting;
  std::vector<std::size_t> membership;

  std::size_t local_degree() const
  {
    std::size_t d = 0;
    for ( auto m : meeting )
      d = std::max( d, bits::count( m ) );
    return d;
  }

  std::size_t point_degree() const
  {
    return membership.empty() ? 0 : *std::max_element( membership.begin(), membership.end() );
  }
};

inline FinitenessProfile finiteness_profile( const CoverFamily& fam )
{
  const auto& space = fam.space();
  FinitenessProfile p;
  for ( std::size_t x = 0; x < space.size(); ++x )
  {
    const Mask v = space.minimal_neighborhood( x );
    Mask meet = 0;
    std::size_t count = 0;
    for ( std::size_t a = 0; a < fam.members().size(); ++a )
    {
      if ( ( fam.members()[a] & v ) != 0 )
        meet |= bits::single( a );
      count += bits::has( fam.members()[a], x );
    }
    p.witness.push_back( v );
    p.meeting.push_back( meet );
    p.membership.push_back( count );
  }
  return p;
}

/// Union of f_O over N(x) equals { a : O(a) meets N(x) } at every x.
inline bool companion_bound_identity( const SetAssignment& o, const SetAssignment& n )
{
  if ( !( o.space() == n.space() ) )
    throw input_error( "companion_bound_identity needs both assignments on one space" );
  if ( !o.is_covering() )
    throw precondition_violation( "companion_bound_identity: O is not a covering assignment" );
  require_neighborhood( n, "companion_bound_identity" );
  const auto f = companion_map( o );
  for ( std::size_t x = 0; x < n.domain_size(); ++x )
  {
    Mask lhs = 0;
    bits::for_each( n.mask( x ), [&]( std::size_t y ) { lhs |= f.values[y]; } );
    Mask rhs = 0;
    for ( std::size_t a = 0; a < o.domain_size(); ++a )
      if ( ( o.mask( a ) & n.mask( x ) ) != 0 )
        rhs |= bits::single( a );
    if ( lhs != rhs )
      return false;
  }
  return true;
}

inline void require_covering( const SetAssignment& c, const char* what )
{
  if ( !c.is_covering() )
    throw precondition_violation( std::string( what ) + " needs a covering assignment, got " + c.to_string() );
}

/// Every refined set sits inside some original set.
inline bool refines_some( const SetAssignment& refined, const SetAssignment& original )
{
  for ( auto r : refined.masks() )
  {
    bool inside = false;
    for ( auto c : original.masks() )
      inside = inside || bits::subset( r, c );
    if ( !inside )
      return false;
  }
  return true;
}

struct ParacompactWitness
{
  SetAssignment refined;
  SetAssignment neighborhoods;
  std::size_t bound = 0;
  bool refines = false;
  bool covering = false;
};

/*! \brief C_r = C together with minimal neighborhoods.

  Minimal neighborhoods give the smallest union of companion values for a fixed C_r, so
  the bound is optimal for that choice.
*/
inline ParacompactWitness paracompact_witness( const SetAssignment& c )
{
  require_covering( c, "paracompact_witness" );
  const auto& space = c.space();
  std::vector<Mask> nb( space.size() );
  for ( std::size_t x = 0; x < space.size(); ++x )
    nb[x] = space.minimal_neighborhood( x );
  ParacompactWitness w;
  w.refined = c;
  w.neighborhoods = SetAssignment::neighborhoods( space, nb );
  const auto f = companion_map( w.refined );
  for ( std::size_t x = 0; x < space.size(); ++x )
  {
    Mask u = 0;
    bits::for_each( nb[x], [&]( std::size_t y ) { u |= f.values[y]; } );
    w.bound = std::max( w.bound, bits::count( u ) );
  }
  w.refines = refines_some( w.refined, c );
  w.covering = w.refined.is_covering();
  if ( !w.refines || !w.covering || !w.neighborhoods.is_neighborhood() )
    throw certification_failure( "paracompact witness failed its own certificate" );
  return w;
}

struct MetacompactWitness
{
  SetAssignment refined;
  std::size_t degree = 0;
  bool refines = false;
  bool covering = false;
};

inline std::size_t point_degree( const FiniteSpace& space, const std::vector<Mask>& sets )
{
  std::size_t d = 0;
  for ( auto v : companion_values( space, sets ) )
    d = std::max( d, bits::count( v ) );
  return d;
}

/*! \brief Greedy per-index shrinking that keeps the family covering.

  Index by index, C_r(a) is replaced by the open inside it that keeps the cover and gives
  the smallest maximum membership (ties: fewer points, then canonical order). The empty
  set is an allowed value.
*/
inline MetacompactWitness metacompact_witness( const SetAssignment& c )
{
  require_covering( c, "metacompact_witness" );
  const auto& space = c.space();
  std::vector<Mask> sets = c.masks();
  for ( std::size_t a = 0; a < sets.size(); ++a )
  {
    Mask others = 0;
    for ( std::size_t b = 0; b < sets.size(); ++b )
      if ( b != a )
        others |= sets[b];
    Mask best = sets[a];
    std::size_t best_degree = point_degree( space, sets );
    for ( auto u : space.open_masks() )
    {
      if ( !bits::subset( u, c.mask( a ) ) || ( u | others ) != space.full_mask() )
        continue;
      auto trial = sets;
      trial[a] = u;
      const std::size_t d = point_degree( space, trial );
      if ( d < best_degree || ( d == best_degree && bits::canonical_less( u, best ) ) )
      {
        best = u;
        best_degree = d;
      }
    }
    sets[a] = best;
  }
  MetacompactWitness w;
  w.refined = SetAssignment::from_masks( space, sets );
  w.degree = point_degree( space, sets );
  w.refines = refines_some( w.refined, c );
  w.covering = w.refined.is_covering();
  if ( !w.refines || !w.covering )
    throw certification_failure( "metacompact witness failed its own certificate" );
  return w;
}

/// Smallest achievable maximum membership over every refining covering assignment (brute force).
inline std::size_t metacompact_degree_brute_force( const SetAssignment& c )
{
  require_covering( c, "metacompact_degree_brute_force" );
  const auto& space = c.space();
  std::vector<std::vector<Mask>> choices( c.domain_size() );
  for ( std::size_t a = 0; a < c.domain_size(); ++a )
    for ( auto u : space.open_masks() )
      if ( bits::subset( u, c.mask( a ) ) )
        choices[a].push_back( u );
  std::size_t best = c.domain_size() + 1;
  std::vector<Mask> cur( c.domain_size() );
  auto rec = [&]( auto&& self, std::size_t a ) -> void {
    if ( a == cur.size() )
    {
      Mask u = 0;
      for ( auto m : cur )
        u |= m;
      if ( u == space.full_mask() )
        best = std::min( best, point_degree( space, cur ) );
      return;
    }
    for ( auto m : choices[a] )
    {
      cur[a] = m;
      self( self, a + 1 );
    }
  };
  rec( rec, 0 );
  return best;
}

struct ExclusivenessResult
{
  std::size_t closed_route = 0;
  std::size_t definition_route = 0;

  bool agrees() const noexcept { return closed_route == definition_route; }
  std::size_t value() const noexcept { return closed_route; }
};

/*! \brief Largest k (capped at n) such that every subset of size at most k is closed,
  alongside the neighborhood-subtraction definition evaluated for the same k.
*/
inline ExclusivenessResult exclusiveness( const FiniteSpace& space )
{
  const std::size_t n = space.size();
  auto closed_ok = [&]( std::size_t k ) {
    for ( Mask a = 0; a <= space.full_mask(); ++a )
      if ( bits::count( a ) <= k && !space.is_closed( a ) )
        return false;
    return true;
  };
  // For every x, open U containing x and A within U minus x with |A| <= k,
  // some open V containing x sits inside U minus A.
  auto definition_ok = [&]( std::size_t k ) {
    for ( std::size_t x = 0; x < n; ++x )
      for ( auto u : space.opens_containing( x ) )
      {
        const Mask room = u & ~bits::single( x );
        for ( Mask a = room;; a = ( a - 1 ) & room )
        {
          if ( bits::count( a ) <= k )
          {
            bool found = false;
            for ( auto v : space.opens_containing( x ) )
              if ( bits::subset( v, u & ~a ) )
              {
                found = true;
                break;
              }
            if ( !found )
              return false;
          }
          if ( a == 0 )
            break;
        }
      }
    return true;
  };
  ExclusivenessResult r;
  for ( std::size_t k = 1; k <= n && closed_ok( k ); ++k )
    r.closed_route = k;
  for ( std::size_t k = 1; k <= n && definition_ok( k ); ++k )
    r.definition_route = k;
  return r;
}

/*! \brief For every closed F and irredundant open cover, some discrete A within F picks
  cover members through its points that together cover F. A need not be closed.
*/
inline bool is_aD( const FiniteSpace& space )
{
  std::vector<std::vector<Mask>> covers;
  for_each_irredundant_cover( space, [&]( const std::vector<Mask>& c ) { covers.push_back( c ); } );
  for ( Mask f = 0; f <= space.full_mask(); ++f )
  {
    if ( !space.is_closed( f ) )
      continue;
    std::vector<Mask> discrete_subsets;
    for ( Mask a = f;; a = ( a - 1 ) & f )
    {
      if ( is_discrete_mask( space, a ) )
        discrete_subsets.push_back( a );
      if ( a == 0 )
        break;
    }
    std::sort( discrete_subsets.begin(), discrete_subsets.end(), []( Mask x, Mask y ) { return bits::canonical_less( x, y ); } );
    for ( const auto& cover : covers )
    {
      bool witnessed = false;
      for ( auto a : discrete_subsets )
      {
        const auto pts = bits::members( a );
        auto rec = [&]( auto&& self, std::size_t i, Mask covered ) -> bool {
          if ( i == pts.size() )
            return bits::subset( f, covered );
          for ( auto m : cover )
            if ( bits::has( m, pts[i] ) && self( self, i + 1, covered | m ) )
              return true;
          return false;
        };
        if ( rec( rec, 0, 0 ) )
        {
          witnessed = true;
          break;
        }
      }
      if ( !witnessed )
        return false;
    }
  }
  return true;
}

/// Some m in F such that no other x in F has m in up(x).
inline bool has_minimal_element( const std::vector<Mask>& up, Mask f ) noexcept
{
  bool found = false;
  bits::for_each( f, [&]( std::size_t m ) {
    if ( found )
      return;
    bool minimal = true;
    bits::for_each( f & ~bits::single( m ), [&]( std::size_t x ) { minimal = minimal && !bits::has( up[x], m ); } );
    found = minimal;
  } );
  return found;
}

/// Reflexive relation given by its up-sets: x <= y iff y in up[x].
struct GlsRelation
{
  std::vector<Mask> up;

  bool related( std::size_t x, std::size_t y ) const { return bits::has( up.at( x ), y ); }
};

inline bool is_gls_relation( const FiniteSpace& space, const std::vector<Mask>& up )
{
  for ( std::size_t x = 0; x < space.size(); ++x )
    if ( !bits::has( up[x], x ) || !space.is_open( up[x] ) )
      return false;
  for ( Mask f = 1; f <= space.full_mask(); ++f )
    if ( space.is_closed( f ) && !has_minimal_element( up, f ) )
      return false;
  return true;
}

inline std::size_t gls_cap()
{
  return 4;
}

/*! \brief Searches reflexive relations with open up-sets for one where every nonempty
  closed set has a minimal element.

  Open up-sets containing x are exactly the opens containing x, so the search runs over
  those choices instead of all 2^(n^2-n) relations. Smaller up-sets come first, so the
  specialization preorder (minimal neighborhoods) is the first candidate.
*/
inline std::optional<GlsRelation> gls_search( const FiniteSpace& space, std::size_t cap = gls_cap() )
{
  if ( space.size() > cap )
    throw resource_error( "gls_search is capped at n = " + std::to_string( cap ) + ", got " + std::to_string( space.size() ) );
  std::optional<GlsRelation> out;
  const std::size_t n = space.size();
  std::vector<std::vector<Mask>> choices( n );
  for ( std::size_t x = 0; x < n; ++x )
    choices[x] = space.opens_containing( x );
  std::vector<Mask> up( n );
  auto rec = [&]( auto&& self, std::size_t x ) -> bool {
    if ( x == n )
      return is_gls_relation( space, up );
    for ( auto u : choices[x] )
    {
      up[x] = u;
      if ( self( self, x + 1 ) )
        return true;
    }
    return false;
  };
  if ( rec( rec, 0 ) )
    out = GlsRelation{ up };
  return out;
}

inline std::size_t left_separated_cap()
{
  return 8;
}

/// First point order (lexicographic over permutations) whose final segments are all open.
inline std::optional<std::vector<std::size_t>> left_separated_search( const FiniteSpace& space,
                                                                      std::size_t cap = left_separated_cap() )
{
  if ( space.size() > cap )
    throw resource_error( "left_separated_search is capped at n = " + std::to_string( cap ) + ", got " +
                          std::to_string( space.size() ) );
  std::vector<std::size_t> order( space.size() );
  std::iota( order.begin(), order.end(), std::size_t{ 0 } );
  do
  {
    bool ok = true;
    Mask tail = 0;
    for ( std::size_t i = order.size(); i-- > 0 && ok; )
    {
      tail |= bits::single( order[i] );
      ok = space.is_open( tail );
    }
    if ( ok )
      return order;
  } while ( std::next_permutation( order.begin(), order.end() ) );
  return std::nullopt;
}

/// A left-separating order read as a GLS relation: x <= y iff x comes no later than y.
inline GlsRelation order_relation( const std::vector<std::size_t>& order )
{
  GlsRelation r;
  r.up.assign( order.size(), 0 );
  Mask tail = 0;
  for ( std::size_t i = order.size(); i-- > 0; )
  {
    tail |= bits::single( order[i] );
    r.up[order[i]] = tail;
  }
  return r;
}

} // namespace topoforge
