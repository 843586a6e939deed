#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "point_set.hpp"

namespace topoforge
{

/*! \brief Result of checking a raw family of subsets against the topology axioms. */
struct AxiomReport
{
  bool within_universe = true;
  bool contains_empty = false;
  bool contains_full = false;
  bool union_closed = false;
  bool intersection_closed = false;

  bool all() const noexcept
  {
    return within_universe && contains_empty && contains_full && union_closed && intersection_closed;
  }

  /// First failing axiom in a fixed order, or an empty string.
  std::string first_failure() const
  {
    if ( !within_universe )
      return "open set outside the ground set";
    if ( !contains_empty )
      return "opens do not contain the empty set";
    if ( !contains_full )
      return "opens do not contain the full set";
    if ( !union_closed )
      return "opens not closed under union";
    if ( !intersection_closed )
      return "opens not closed under intersection";
    return {};
  }
};

/// Checks a family of masks over n points. Duplicates are tolerated.
inline AxiomReport verify_axioms( std::size_t n, std::span<const Mask> family )
{
  AxiomReport r;
  const Mask full = bits::full( n );
  std::unordered_set<Mask> present;
  for ( auto m : family )
  {
    if ( ( m & ~full ) != 0 )
      r.within_universe = false;
    present.insert( m );
  }
  r.contains_empty = present.contains( Mask{ 0 } );
  r.contains_full = present.contains( full );
  r.union_closed = true;
  r.intersection_closed = true;
  for ( auto a : present )
  {
    for ( auto b : present )
    {
      if ( !present.contains( a | b ) )
        r.union_closed = false;
      if ( !present.contains( a & b ) )
        r.intersection_closed = false;
    }
  }
  return r;
}

inline AxiomReport verify_axioms( std::size_t n, const std::vector<PointSet>& family )
{
  std::vector<Mask> masks;
  masks.reserve( family.size() );
  for ( const auto& s : family )
  {
    if ( s.universe() != n )
      throw input_error( "family member " + s.to_string() + " has universe " + std::to_string( s.universe() ) +
                         ", expected " + std::to_string( n ) );
    masks.push_back( s.mask() );
  }
  return verify_axioms( n, masks );
}

/*! \brief A topology on the points {0, ..., n-1}.

  The open family is stored duplicate-free and sorted by (popcount, value), so two
  spaces are equal exactly when their open families coincide. Copies share the
  immutable payload.
*/
class FiniteSpace
{
public:
  /// The empty space (the initial object).
  FiniteSpace() : FiniteSpace( 0, std::vector<Mask>{ 0 }, trusted{} ) {}

  /// Validates the family; throws input_error naming the first failing axiom.
  static FiniteSpace from_opens( std::size_t n, std::vector<Mask> opens )
  {
    if ( n > max_universe )
      throw resource_error( "space with " + std::to_string( n ) + " points exceeds the 64-point limit" );
    const auto report = verify_axioms( n, opens );
    if ( !report.all() )
      throw input_error( report.first_failure() );
    return FiniteSpace( n, std::move( opens ), trusted{} );
  }

  static FiniteSpace from_opens( std::size_t n, const std::vector<PointSet>& opens )
  {
    std::vector<Mask> masks;
    masks.reserve( opens.size() );
    for ( const auto& s : opens )
    {
      if ( s.universe() != n )
        throw input_error( "open " + s.to_string() + " has universe " + std::to_string( s.universe() ) +
                           ", expected " + std::to_string( n ) );
      masks.push_back( s.mask() );
    }
    return from_opens( n, std::move( masks ) );
  }

  static FiniteSpace discrete( std::size_t n );
  static FiniteSpace indiscrete( std::size_t n );
  /// Opens {}, {0}, {0,1}.
  static FiniteSpace sierpinski() { return from_opens( 2, std::vector<Mask>{ 0b00, 0b01, 0b11 } ); }

  std::size_t size() const noexcept { return data_->n; }
  Mask full_mask() const noexcept { return bits::full( data_->n ); }
  PointSet points() const { return PointSet::full( data_->n ); }

  std::span<const Mask> open_masks() const noexcept { return data_->opens; }
  std::size_t open_count() const noexcept { return data_->opens.size(); }

  std::vector<PointSet> opens() const
  {
    std::vector<PointSet> out;
    out.reserve( data_->opens.size() );
    for ( auto m : data_->opens )
      out.emplace_back( data_->n, m );
    return out;
  }

  /// Smallest open set containing x.
  Mask minimal_neighborhood( std::size_t x ) const { return data_->minimal.at( x ); }

  /// O(|m|) membership test through minimal neighborhoods.
  bool is_open( Mask m ) const noexcept
  {
    if ( ( m & ~full_mask() ) != 0 )
      return false;
    bool ok = true;
    bits::for_each( m, [&]( std::size_t x ) { ok = ok && bits::subset( data_->minimal[x], m ); } );
    return ok;
  }

  bool is_open( const PointSet& s ) const
  {
    require_universe( s );
    return is_open( s.mask() );
  }

  /// Membership by binary search over the canonical order.
  bool contains_open( Mask m ) const noexcept
  {
    return std::binary_search( data_->opens.begin(), data_->opens.end(), m, bits::canonical_less );
  }

  bool is_closed( Mask m ) const noexcept { return is_open( ~m & full_mask() ); }

  /// Opens containing point x, in canonical order.
  std::vector<Mask> opens_containing( std::size_t x ) const
  {
    std::vector<Mask> out;
    for ( auto m : data_->opens )
      if ( bits::has( m, x ) )
        out.push_back( m );
    return out;
  }

  void require_universe( const PointSet& s ) const
  {
    if ( s.universe() != data_->n )
      throw input_error( "point set " + s.to_string() + " has universe " + std::to_string( s.universe() ) +
                         " but the space has " + std::to_string( data_->n ) + " points" );
  }

  friend bool operator==( const FiniteSpace& a, const FiniteSpace& b )
  {
    return a.data_ == b.data_ || ( a.data_->n == b.data_->n && a.data_->opens == b.data_->opens );
  }

  std::string to_string() const
  {
    std::string out = "n=" + std::to_string( size() ) + " opens=[";
    bool first = true;
    for ( auto m : data_->opens )
    {
      if ( !first )
        out += " ";
      out += PointSet( size(), m ).to_string();
      first = false;
    }
    return out + "]";
  }

private:
  struct trusted
  {
  };

  struct Data
  {
    std::size_t n = 0;
    std::vector<Mask> opens;
    std::vector<Mask> minimal;
  };

  FiniteSpace( std::size_t n, std::vector<Mask> opens, trusted )
  {
    std::sort( opens.begin(), opens.end(), bits::canonical_less );
    opens.erase( std::unique( opens.begin(), opens.end() ), opens.end() );
    auto d = std::make_shared<Data>();
    d->n = n;
    d->minimal.assign( n, bits::full( n ) );
    for ( auto m : opens )
      bits::for_each( m, [&]( std::size_t x ) { d->minimal[x] &= m; } );
    d->opens = std::move( opens );
    data_ = std::move( d );
  }

  friend FiniteSpace space_from_minimal_neighborhoods( std::size_t n, const std::vector<Mask>& minimal );

  std::shared_ptr<const Data> data_;
};

/*! \brief Builds the space whose opens are all unions of the given sets.

  The caller guarantees that minimal[x] contains x and that y in minimal[x] implies
  minimal[y] is a subset of minimal[x]; the result then has exactly these minimal
  neighborhoods.
*/
inline FiniteSpace space_from_minimal_neighborhoods( std::size_t n, const std::vector<Mask>& minimal )
{
  std::vector<Mask> unions{ 0 };
  std::unordered_set<Mask> seen{ 0 };
  for ( std::size_t x = 0; x < n; ++x )
  {
    const auto current = unions.size();
    for ( std::size_t i = 0; i < current; ++i )
    {
      const Mask u = unions[i] | minimal[x];
      if ( seen.insert( u ).second )
        unions.push_back( u );
    }
  }
  if ( n == 0 )
    return FiniteSpace();
  return FiniteSpace( n, std::move( unions ), FiniteSpace::trusted{} );
}

inline FiniteSpace FiniteSpace::discrete( std::size_t n )
{
  std::vector<Mask> minimal( n );
  for ( std::size_t x = 0; x < n; ++x )
    minimal[x] = bits::single( x );
  return space_from_minimal_neighborhoods( n, minimal );
}

inline FiniteSpace FiniteSpace::indiscrete( std::size_t n )
{
  if ( n == 0 )
    return FiniteSpace();
  return from_opens( n, std::vector<Mask>{ 0, bits::full( n ) } );
}

/*! \brief Smallest topology on n points containing every subbase member.

  The minimal neighborhood of x is the intersection of the subbase members containing
  x (the whole set when none does), and the topology is the family of unions of those.
  An empty subbase therefore yields the indiscrete topology.
*/
inline FiniteSpace generate_topology( std::size_t n, const std::vector<PointSet>& subbase )
{
  if ( n > max_universe )
    throw resource_error( "cannot generate a topology on " + std::to_string( n ) + " points" );
  std::vector<Mask> minimal( n, bits::full( n ) );
  for ( const auto& s : subbase )
  {
    if ( s.universe() != n )
      throw input_error( "subbase member " + s.to_string() + " has universe " + std::to_string( s.universe() ) +
                         ", expected " + std::to_string( n ) );
    bits::for_each( s.mask(), [&]( std::size_t x ) { minimal[x] &= s.mask(); } );
  }
  return space_from_minimal_neighborhoods( n, minimal );
}

struct SubsetClass
{
  bool is_closed = false;
  bool is_discrete = false;
  bool is_closed_discrete = false;
};

/// A set is discrete when each member has an open set meeting the set only in that member.
inline bool is_discrete_mask( const FiniteSpace& space, Mask s ) noexcept
{
  bool ok = true;
  bits::for_each( s, [&]( std::size_t x ) { ok = ok && ( space.minimal_neighborhood( x ) & s ) == bits::single( x ); } );
  return ok;
}

inline bool is_closed_discrete_mask( const FiniteSpace& space, Mask s ) noexcept
{
  return space.is_closed( s ) && is_discrete_mask( space, s );
}

inline SubsetClass classify_subset( const FiniteSpace& space, const PointSet& s )
{
  space.require_universe( s );
  SubsetClass c;
  c.is_closed = space.is_closed( s.mask() );
  c.is_discrete = is_discrete_mask( space, s.mask() );
  c.is_closed_discrete = c.is_closed && c.is_discrete;
  return c;
}

inline Mask closure_mask( const FiniteSpace& space, Mask s ) noexcept
{
  Mask out = 0;
  for ( std::size_t x = 0; x < space.size(); ++x )
    if ( ( space.minimal_neighborhood( x ) & s ) != 0 )
      out |= bits::single( x );
  return out;
}

/// Smallest closed superset: x is in the closure iff its minimal neighborhood meets s.
inline PointSet closure( const FiniteSpace& space, const PointSet& s )
{
  space.require_universe( s );
  return PointSet( space.size(), closure_mask( space, s.mask() ) );
}

inline Mask interior_mask( const FiniteSpace& space, Mask s ) noexcept
{
  Mask out = 0;
  for ( std::size_t x = 0; x < space.size(); ++x )
    if ( bits::subset( space.minimal_neighborhood( x ), s ) )
      out |= bits::single( x );
  return out;
}

struct SeparationLevel
{
  bool t0 = false;
  bool t1 = false;
};

inline SeparationLevel separation_level( const FiniteSpace& space )
{
  SeparationLevel s{ true, true };
  for ( std::size_t x = 0; x < space.size(); ++x )
  {
    if ( !space.is_closed( bits::single( x ) ) )
      s.t1 = false;
    for ( std::size_t y = x + 1; y < space.size(); ++y )
      if ( space.minimal_neighborhood( x ) == space.minimal_neighborhood( y ) )
        s.t0 = false;
  }
  return s;
}

inline bool is_t1( const FiniteSpace& space )
{
  return separation_level( space ).t1;
}

/// A subspace together with the parent index of each of its points.
struct Subspace
{
  FiniteSpace space;
  std::vector<std::size_t> to_parent;
  Mask carrier = 0;
};

inline Subspace subspace( const FiniteSpace& space, const PointSet& s )
{
  space.require_universe( s );
  std::vector<Mask> traces;
  traces.reserve( space.open_count() );
  for ( auto u : space.open_masks() )
    traces.push_back( bits::compress( u & s.mask(), s.mask() ) );
  Subspace out;
  out.carrier = s.mask();
  out.to_parent = s.members();
  out.space = s.size() == 0 ? FiniteSpace() : FiniteSpace::from_opens( s.size(), std::move( traces ) );
  return out;
}

} // namespace topoforge
