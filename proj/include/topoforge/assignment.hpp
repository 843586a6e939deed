#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "continuous_map.hpp"
#include "errors.hpp"
#include "finite_space.hpp"
#include "point_set.hpp"
#include "puf.hpp"

namespace topoforge
{

/// Whether the index set of an assignment is the point set of its space or an abstract set.
enum class IndexDomain
{
  abstract,
  points
};

/*! \brief An indexed family a -> O(a) of open sets of a space.

  The index set is {0, ..., m-1}. When it is declared to be the point set itself the
  assignment may qualify as a neighborhood assignment; an abstract index set never does.
*/
class SetAssignment
{
public:
  SetAssignment() = default;

  SetAssignment( FiniteSpace space, const std::vector<PointSet>& sets, IndexDomain domain = IndexDomain::abstract )
      : space_( std::move( space ) ), domain_( domain )
  {
    sets_.reserve( sets.size() );
    for ( std::size_t a = 0; a < sets.size(); ++a )
    {
      if ( sets[a].universe() != space_.size() )
        throw input_error( "set at index " + std::to_string( a ) + " has universe " +
                           std::to_string( sets[a].universe() ) + ", expected " + std::to_string( space_.size() ) );
      sets_.push_back( sets[a].mask() );
    }
    validate();
  }

  static SetAssignment from_masks( FiniteSpace space, std::vector<Mask> sets, IndexDomain domain = IndexDomain::abstract )
  {
    SetAssignment s;
    s.space_ = std::move( space );
    s.sets_ = std::move( sets );
    s.domain_ = domain;
    s.validate();
    return s;
  }

  /// Neighborhood-style assignment indexed by the points.
  static SetAssignment neighborhoods( FiniteSpace space, std::vector<Mask> sets )
  {
    return from_masks( std::move( space ), std::move( sets ), IndexDomain::points );
  }

  const FiniteSpace& space() const noexcept { return space_; }
  std::size_t domain_size() const noexcept { return sets_.size(); }
  IndexDomain index_domain() const noexcept { return domain_; }
  const std::vector<Mask>& masks() const noexcept { return sets_; }
  Mask mask( std::size_t a ) const { return sets_.at( a ); }
  PointSet set( std::size_t a ) const { return PointSet( space_.size(), sets_.at( a ) ); }

  Mask union_of( Mask indices ) const noexcept
  {
    Mask u = 0;
    bits::for_each( indices, [&]( std::size_t a ) { u |= sets_[a]; } );
    return u;
  }

  bool is_covering() const noexcept { return union_of( bits::full( sets_.size() ) ) == space_.full_mask(); }

  bool is_neighborhood() const noexcept
  {
    if ( domain_ != IndexDomain::points || sets_.size() != space_.size() )
      return false;
    for ( std::size_t x = 0; x < sets_.size(); ++x )
      if ( !bits::has( sets_[x], x ) )
        return false;
    return true;
  }

  friend bool operator==( const SetAssignment& a, const SetAssignment& b )
  {
    return a.domain_ == b.domain_ && a.sets_ == b.sets_ && a.space_ == b.space_;
  }

  std::string to_string() const
  {
    std::string out = "[";
    for ( std::size_t a = 0; a < sets_.size(); ++a )
    {
      if ( a > 0 )
        out += " ";
      out += std::to_string( a ) + ":" + set( a ).to_string();
    }
    return out + "]";
  }

private:
  void validate() const
  {
    if ( sets_.size() > max_universe )
      throw resource_error( "assignment index sets are limited to 64 indices" );
    if ( domain_ == IndexDomain::points && sets_.size() != space_.size() )
      throw input_error( "point-indexed assignment needs one set per point (" + std::to_string( space_.size() ) +
                         "), got " + std::to_string( sets_.size() ) );
    for ( std::size_t a = 0; a < sets_.size(); ++a )
      if ( !space_.is_open( sets_[a] ) )
        throw input_error( "set at index " + std::to_string( a ) + " (" + PointSet( space_.size(), sets_[a] & space_.full_mask() ).to_string() +
                           ") is not open" );
  }

  FiniteSpace space_;
  std::vector<Mask> sets_;
  IndexDomain domain_ = IndexDomain::abstract;
};

/// f(x) = { a : x in O(a) } as masks over the index set.
inline std::vector<Mask> companion_values( const FiniteSpace& space, const std::vector<Mask>& sets )
{
  std::vector<Mask> f( space.size(), 0 );
  for ( std::size_t a = 0; a < sets.size(); ++a )
    bits::for_each( sets[a], [&]( std::size_t x ) { f[x] |= bits::single( a ); } );
  return f;
}

/// { x : a in f(x) }.
inline Mask companion_preimage( const std::vector<Mask>& values, std::size_t a ) noexcept
{
  Mask out = 0;
  for ( std::size_t x = 0; x < values.size(); ++x )
    if ( bits::has( values[x], a ) )
      out |= bits::single( x );
  return out;
}

/*! \brief The map x -> { a : x in O(a) } into the puf space on the index set.

  Values are stored densely, one index mask per point. The certificate records that the
  preimage of every subbasic U(a) equals O(a) and is open.
*/
struct CompanionMap
{
  FiniteSpace space;
  std::size_t domain_size = 0;
  std::vector<Mask> values;
  bool preimage_identity = false;
  bool continuous = false;

  bool certified() const noexcept { return preimage_identity && continuous; }
  PointSet value( std::size_t x ) const { return PointSet( domain_size, values.at( x ) ); }

  /// The companion as an arrow into the materialized puf space (needs 2^m within the cap).
  ContinuousMap as_continuous_map() const
  {
    const auto& target = cached_puf_space( domain_size );
    PointMap v( values.begin(), values.end() );
    return ContinuousMap( space, target.space, std::move( v ) );
  }
};

inline CompanionMap companion_map( const SetAssignment& assignment )
{
  CompanionMap f;
  f.space = assignment.space();
  f.domain_size = assignment.domain_size();
  f.values = companion_values( assignment.space(), assignment.masks() );
  f.preimage_identity = true;
  f.continuous = true;
  for ( std::size_t a = 0; a < f.domain_size; ++a )
  {
    const Mask pre = companion_preimage( f.values, a );
    f.preimage_identity = f.preimage_identity && pre == assignment.mask( a );
    f.continuous = f.continuous && assignment.space().is_open( pre );
  }
  if ( !f.certified() )
    throw certification_failure( "companion map failed its preimage certificate for " + assignment.to_string() );
  return f;
}

enum class AssignmentKind
{
  set,
  covering,
  neighborhood
};

inline const char* to_string( AssignmentKind k )
{
  switch ( k )
  {
  case AssignmentKind::set:
    return "set";
  case AssignmentKind::covering:
    return "covering";
  case AssignmentKind::neighborhood:
    return "neighborhood";
  }
  return "?";
}

/// Most specific kind plus both routes for each condition.
struct AssignmentClass
{
  AssignmentKind kind = AssignmentKind::set;
  bool covering_direct = false;
  bool covering_companion = false;
  bool neighborhood_direct = false;
  bool neighborhood_companion = false;
  /// Points whose companion value is empty.
  Mask uncovered = 0;
};

/// Covering: the union is X, equivalently f never hits the empty set. Neighborhood: x in f(x).
inline AssignmentClass classify_assignment( const SetAssignment& assignment )
{
  const auto f = companion_map( assignment );
  const auto& space = assignment.space();
  AssignmentClass c;
  c.covering_direct = assignment.is_covering();
  c.neighborhood_direct = assignment.is_neighborhood();

  c.covering_companion = true;
  for ( std::size_t x = 0; x < space.size(); ++x )
    if ( f.values[x] == 0 )
    {
      c.covering_companion = false;
      c.uncovered |= bits::single( x );
    }
  // Also the other half of the covering chain: f^{-1}(union of all U(a)) = X.
  Mask hit_union = 0;
  for ( std::size_t a = 0; a < f.domain_size; ++a )
    hit_union |= companion_preimage( f.values, a );
  if ( ( hit_union == space.full_mask() ) != c.covering_companion )
    throw certification_failure( "covering chain disagrees between f^{-1}(union S(A)) and f^{-1}({empty})" );

  c.neighborhood_companion = assignment.index_domain() == IndexDomain::points && f.domain_size == space.size();
  if ( c.neighborhood_companion )
    for ( std::size_t x = 0; x < space.size(); ++x )
      c.neighborhood_companion = c.neighborhood_companion && bits::has( f.values[x], x );

  if ( c.covering_direct != c.covering_companion || c.neighborhood_direct != c.neighborhood_companion )
    throw certification_failure( "assignment classification routes disagree for " + assignment.to_string() );

  c.kind = c.neighborhood_direct ? AssignmentKind::neighborhood
           : c.covering_direct   ? AssignmentKind::covering
                                 : AssignmentKind::set;
  return c;
}

struct UniquenessReport
{
  bool exhaustive = false;
  std::uint64_t candidates_checked = 0;
  /// Exhaustive regime: functions satisfying every preimage identity. Sampled regime: 1 (the companion) if no sample did.
  std::uint64_t solutions = 0;
  bool solution_is_companion = false;
  bool solution_is_continuous = false;

  bool unique() const noexcept { return solutions == 1 && solution_is_companion && solution_is_continuous; }
};

/*! \brief Confirms that the companion map is the only function X -> P(A) whose
  preimages of the subbasic sets recover the assignment.

  Exhaustive when (2^m)^n <= exhaustive_cap, otherwise `samples` random candidates
  different from the companion are each shown to violate some preimage identity.
*/
inline UniquenessReport verify_companion_unique( const SetAssignment& assignment, std::uint64_t exhaustive_cap,
                                                 std::uint64_t samples = 1000, std::uint64_t seed = 0 )
{
  const auto f = companion_map( assignment );
  const std::size_t n = assignment.space().size();
  const std::size_t m = assignment.domain_size();
  auto satisfies = [&]( const std::vector<Mask>& g ) {
    for ( std::size_t a = 0; a < m; ++a )
      if ( companion_preimage( g, a ) != assignment.mask( a ) )
        return false;
    return true;
  };
  auto continuous = [&]( const std::vector<Mask>& g ) {
    for ( std::size_t a = 0; a < m; ++a )
      if ( !assignment.space().is_open( companion_preimage( g, a ) ) )
        return false;
    return true;
  };

  UniquenessReport r;
  const double total = std::pow( 2.0, static_cast<double>( m * n ) );
  if ( m * n < 64 && total <= static_cast<double>( exhaustive_cap ) )
  {
    r.exhaustive = true;
    const Mask values_per_point = bits::full( m );
    std::vector<Mask> g( n, 0 );
    while ( true )
    {
      ++r.candidates_checked;
      if ( satisfies( g ) )
      {
        ++r.solutions;
        r.solution_is_companion = g == f.values;
        r.solution_is_continuous = continuous( g );
      }
      std::size_t i = 0;
      for ( ; i < n; ++i )
      {
        if ( g[i] < values_per_point )
        {
          ++g[i];
          break;
        }
        g[i] = 0;
      }
      if ( i == n )
        break;
    }
    return r;
  }

  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<Mask> pick( 0, bits::full( m ) );
  r.solutions = 1;
  r.solution_is_companion = true;
  r.solution_is_continuous = continuous( f.values );
  for ( std::uint64_t s = 0; s < samples; ++s )
  {
    std::vector<Mask> g( n );
    for ( auto& v : g )
      v = pick( rng );
    if ( g == f.values )
      continue;
    ++r.candidates_checked;
    if ( satisfies( g ) )
      ++r.solutions;
  }
  return r;
}

/// O restricted to an index subset D, re-indexed in increasing order, with its trace companion.
struct Restriction
{
  SetAssignment assignment;
  std::vector<std::size_t> kept_indices;
  /// g(x) = f(x) intersected with D, as masks over the re-indexed D.
  std::vector<Mask> trace_companion;
  bool companion_agrees = false;
  bool covering = false;
  bool trace_never_empty = false;
};

inline Restriction restrict_assignment( const SetAssignment& assignment, const PointSet& kept )
{
  if ( kept.universe() != assignment.domain_size() )
    throw input_error( "restriction set " + kept.to_string() + " is not over the index set of size " +
                       std::to_string( assignment.domain_size() ) );
  const auto f = companion_map( assignment );
  Restriction r;
  r.kept_indices = kept.members();
  std::vector<Mask> sets;
  for ( auto a : r.kept_indices )
    sets.push_back( assignment.mask( a ) );
  r.assignment = SetAssignment::from_masks( assignment.space(), std::move( sets ) );
  r.trace_companion.resize( f.values.size() );
  for ( std::size_t x = 0; x < f.values.size(); ++x )
    r.trace_companion[x] = bits::compress( f.values[x] & kept.mask(), kept.mask() );
  r.companion_agrees = companion_map( r.assignment ).values == r.trace_companion;
  r.covering = r.assignment.is_covering();
  r.trace_never_empty = true;
  for ( auto g : r.trace_companion )
    r.trace_never_empty = r.trace_never_empty && g != 0;
  return r;
}

inline void require_neighborhood( const SetAssignment& n, const char* what )
{
  if ( !n.is_neighborhood() )
    throw precondition_violation( std::string( what ) + " needs a neighborhood assignment, got " + n.to_string() );
}

/// D is a kernel of N when the sets N(d), d in D, cover X. Closedness is not required.
inline bool is_kernel( const SetAssignment& n, const PointSet& d )
{
  require_neighborhood( n, "is_kernel" );
  n.space().require_universe( d );
  return n.union_of( d.mask() ) == n.space().full_mask();
}

struct RefinementReport
{
  bool direct = false;
  bool companion_route = false;
  /// Also keeps every point inside its own set.
  bool neighborhood_refinement = false;

  bool is_refinement() const noexcept { return direct && companion_route; }
};

/// candidate(a) within base(a) for all a, cross-checked against pointwise companion containment.
inline RefinementReport is_refinement( const SetAssignment& candidate, const SetAssignment& base )
{
  if ( !( candidate.space() == base.space() ) )
    throw input_error( "refinement check needs both assignments on the same space" );
  if ( candidate.domain_size() != base.domain_size() )
    throw input_error( "refinement check needs equal index sets (" + std::to_string( candidate.domain_size() ) +
                       " vs " + std::to_string( base.domain_size() ) + ")" );
  RefinementReport r;
  r.direct = true;
  for ( std::size_t a = 0; a < base.domain_size(); ++a )
    r.direct = r.direct && bits::subset( candidate.mask( a ), base.mask( a ) );
  const auto fc = companion_map( candidate );
  const auto fb = companion_map( base );
  r.companion_route = true;
  for ( std::size_t x = 0; x < fc.values.size(); ++x )
    r.companion_route = r.companion_route && bits::subset( fc.values[x], fb.values[x] );
  if ( r.direct != r.companion_route )
    throw certification_failure( "refinement routes disagree" );
  r.neighborhood_refinement = r.direct && base.is_neighborhood() &&
                              candidate.index_domain() == IndexDomain::points;
  if ( r.neighborhood_refinement )
    for ( std::size_t x = 0; x < candidate.domain_size(); ++x )
      r.neighborhood_refinement = r.neighborhood_refinement && bits::has( candidate.mask( x ), x );
  return r;
}

/// N*(d) = N(d) minus (D minus {d}) on D, N* = N elsewhere.
inline std::vector<Mask> puncture_masks( const std::vector<Mask>& nbhd, Mask d )
{
  std::vector<Mask> out = nbhd;
  bits::for_each( d, [&]( std::size_t x ) { out[x] = nbhd[x] & ~( d & ~bits::single( x ) ); } );
  return out;
}

/*! \brief Punctured refinement along a closed discrete kernel.

  Subsets of a closed discrete set are closed, so every punctured set stays open and
  N*(d) meets D only in d.
*/
inline SetAssignment puncture_refinement( const SetAssignment& n, const PointSet& d )
{
  require_neighborhood( n, "puncture_refinement" );
  n.space().require_universe( d );
  const auto c = classify_subset( n.space(), d );
  if ( !c.is_closed_discrete )
    throw precondition_violation( "puncture_refinement: " + d.to_string() + " is not closed discrete (closed=" +
                                  ( c.is_closed ? "yes" : "no" ) + ", discrete=" + ( c.is_discrete ? "yes" : "no" ) + ")" );
  if ( !is_kernel( n, d ) )
    throw precondition_violation( "puncture_refinement: " + d.to_string() + " is not a kernel" );
  return SetAssignment::neighborhoods( n.space(), puncture_masks( n.masks(), d.mask() ) );
}

inline bool is_u_sticky_mask( const FiniteSpace& space, const std::vector<Mask>& u, Mask d ) noexcept
{
  if ( !is_closed_discrete_mask( space, d ) )
    return false;
  Mask covered = 0;
  bits::for_each( d, [&]( std::size_t x ) { covered |= u[x]; } );
  for ( std::size_t x = 0; x < space.size(); ++x )
    if ( ( u[x] & d ) != 0 && !bits::has( covered, x ) )
      return false;
  return true;
}

/// D closed discrete, and any x whose U(x) meets D is covered by U(D).
inline bool is_u_sticky( const SetAssignment& u, const PointSet& d )
{
  require_neighborhood( u, "is_u_sticky" );
  u.space().require_universe( d );
  return is_u_sticky_mask( u.space(), u.masks(), d.mask() );
}

inline bool sticky_order_mask( const std::vector<Mask>& u, Mask d, Mask d2 ) noexcept
{
  Mask covered = 0;
  bits::for_each( d, [&]( std::size_t x ) { covered |= u[x]; } );
  return bits::subset( d, d2 ) && ( ( d2 & ~d ) & covered ) == 0;
}

/// D precedes D2: D within D2, and D2 minus D avoids U(D).
inline bool sticky_order( const SetAssignment& u, const PointSet& d, const PointSet& d2 )
{
  require_neighborhood( u, "sticky_order" );
  u.space().require_universe( d );
  u.space().require_universe( d2 );
  if ( !is_u_sticky_mask( u.space(), u.masks(), d.mask() ) )
    throw precondition_violation( "sticky_order: " + d.to_string() + " is not U-sticky" );
  if ( !is_u_sticky_mask( u.space(), u.masks(), d2.mask() ) )
    throw precondition_violation( "sticky_order: " + d2.to_string() + " is not U-sticky" );
  return sticky_order_mask( u.masks(), d.mask(), d2.mask() );
}

/// Calls fn(masks) for every neighborhood assignment of the space, in mixed-radix order.
template<typename Fn>
void for_each_neighborhood_assignment( const FiniteSpace& space, Fn&& fn )
{
  const std::size_t n = space.size();
  std::vector<std::vector<Mask>> choices( n );
  for ( std::size_t x = 0; x < n; ++x )
    choices[x] = space.opens_containing( x );
  std::vector<std::size_t> idx( n, 0 );
  std::vector<Mask> current( n );
  for ( std::size_t x = 0; x < n; ++x )
    current[x] = choices[x][0];
  while ( true )
  {
    fn( static_cast<const std::vector<Mask>&>( current ) );
    std::size_t i = 0;
    for ( ; i < n; ++i )
    {
      if ( ++idx[i] < choices[i].size() )
      {
        current[i] = choices[i][idx[i]];
        break;
      }
      idx[i] = 0;
      current[i] = choices[i][0];
    }
    if ( i == n )
      return;
  }
}

/// Calls fn(masks) for every assignment of m opens (any opens, abstract index set).
template<typename Fn>
void for_each_set_assignment( const FiniteSpace& space, std::size_t m, Fn&& fn )
{
  const auto opens = space.open_masks();
  std::vector<std::size_t> idx( m, 0 );
  std::vector<Mask> current( m, opens[0] );
  while ( true )
  {
    fn( static_cast<const std::vector<Mask>&>( current ) );
    std::size_t i = 0;
    for ( ; i < m; ++i )
    {
      if ( ++idx[i] < opens.size() )
      {
        current[i] = opens[idx[i]];
        break;
      }
      idx[i] = 0;
      current[i] = opens[0];
    }
    if ( i == m )
      return;
  }
}

} // namespace topoforge
