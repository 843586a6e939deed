#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_space.hpp"
#include "point_set.hpp"

namespace topoforge
{

using PointMap = std::vector<std::size_t>;

/// Preimage of a codomain set under a point function.
inline Mask preimage( const PointMap& values, Mask target ) noexcept
{
  Mask out = 0;
  for ( std::size_t x = 0; x < values.size(); ++x )
    if ( bits::has( target, values[x] ) )
      out |= bits::single( x );
  return out;
}

inline Mask image( const PointMap& values, Mask source ) noexcept
{
  Mask out = 0;
  bits::for_each( source, [&]( std::size_t x ) { out |= bits::single( values[x] ); } );
  return out;
}

struct ContinuityCheck
{
  bool continuous = true;
  /// First codomain open (canonical order) whose preimage is not open.
  std::optional<PointSet> offending_open;
};

inline void check_values_in_range( const FiniteSpace& domain, const FiniteSpace& codomain, const PointMap& values )
{
  if ( values.size() != domain.size() )
    throw input_error( "map has " + std::to_string( values.size() ) + " values but the domain has " +
                       std::to_string( domain.size() ) + " points" );
  for ( std::size_t x = 0; x < values.size(); ++x )
    if ( values[x] >= codomain.size() )
      throw input_error( "value " + std::to_string( values[x] ) + " at point " + std::to_string( x ) +
                         " is outside the codomain of size " + std::to_string( codomain.size() ) );
}

/// Every codomain open must pull back to a domain open.
inline ContinuityCheck check_continuous( const FiniteSpace& domain, const FiniteSpace& codomain, const PointMap& values )
{
  check_values_in_range( domain, codomain, values );
  for ( auto u : codomain.open_masks() )
  {
    if ( !domain.is_open( preimage( values, u ) ) )
      return { false, PointSet( codomain.size(), u ) };
  }
  return {};
}

/// Continuity tested on a declared subbase of the codomain topology only.
inline ContinuityCheck check_continuous_subbase( const FiniteSpace& domain, const FiniteSpace& codomain,
                                                 const PointMap& values, const std::vector<PointSet>& subbase )
{
  check_values_in_range( domain, codomain, values );
  for ( const auto& s : subbase )
  {
    codomain.require_universe( s );
    if ( !domain.is_open( preimage( values, s.mask() ) ) )
      return { false, s };
  }
  return {};
}

/*! \brief A point function between finite spaces plus its continuity certificate.

  `certified()` is true exactly when every open of the codomain pulls back to an open
  of the domain. Composition of certified maps is certified without a recheck.
*/
class ContinuousMap
{
public:
  ContinuousMap() = default;

  /// Checks range and continuity; an uncertified map is still a valid value.
  ContinuousMap( FiniteSpace domain, FiniteSpace codomain, PointMap values )
      : domain_( std::move( domain ) ), codomain_( std::move( codomain ) ), values_( std::move( values ) )
  {
    const auto check = check_continuous( domain_, codomain_, values_ );
    certified_ = check.continuous;
    offending_ = check.offending_open;
  }

  static ContinuousMap identity( const FiniteSpace& space )
  {
    PointMap v( space.size() );
    for ( std::size_t i = 0; i < v.size(); ++i )
      v[i] = i;
    return ContinuousMap( space, space, std::move( v ), true );
  }

  /// Throws precondition_violation when the point function is not continuous.
  static ContinuousMap certified_or_throw( FiniteSpace domain, FiniteSpace codomain, PointMap values )
  {
    ContinuousMap m( std::move( domain ), std::move( codomain ), std::move( values ) );
    if ( !m.certified() )
      throw precondition_violation( "map is not continuous: preimage of " + m.offending_->to_string() + " is not open" );
    return m;
  }

  const FiniteSpace& domain() const noexcept { return domain_; }
  const FiniteSpace& codomain() const noexcept { return codomain_; }
  const PointMap& values() const noexcept { return values_; }
  std::size_t operator()( std::size_t x ) const { return values_.at( x ); }

  bool certified() const noexcept { return certified_; }
  const std::optional<PointSet>& offending_open() const noexcept { return offending_; }

  bool is_injective() const
  {
    Mask seen = 0;
    for ( auto v : values_ )
    {
      if ( bits::has( seen, v ) )
        return false;
      seen |= bits::single( v );
    }
    return true;
  }

  bool is_surjective() const { return image( values_, domain_.full_mask() ) == codomain_.full_mask(); }

  PointSet preimage_of( const PointSet& s ) const
  {
    codomain_.require_universe( s );
    return PointSet( domain_.size(), preimage( values_, s.mask() ) );
  }

  PointSet image_of( const PointSet& s ) const
  {
    domain_.require_universe( s );
    return PointSet( codomain_.size(), image( values_, s.mask() ) );
  }

  /// Image of every closed set is closed.
  bool is_closed_map() const
  {
    for ( auto u : domain_.open_masks() )
    {
      const Mask closed = ~u & domain_.full_mask();
      if ( !codomain_.is_closed( image( values_, closed ) ) )
        return false;
    }
    return true;
  }

  friend bool operator==( const ContinuousMap& a, const ContinuousMap& b )
  {
    return a.values_ == b.values_ && a.domain_ == b.domain_ && a.codomain_ == b.codomain_;
  }

  /// second after first; the spaces must match exactly.
  friend ContinuousMap compose( const ContinuousMap& second, const ContinuousMap& first )
  {
    if ( !( first.codomain_ == second.domain_ ) )
      throw input_error( "cannot compose: codomain of the first map differs from domain of the second" );
    PointMap v( first.values_.size() );
    for ( std::size_t x = 0; x < v.size(); ++x )
      v[x] = second.values_[first.values_[x]];
    if ( first.certified_ && second.certified_ )
      return ContinuousMap( first.domain_, second.codomain_, std::move( v ), true );
    return ContinuousMap( first.domain_, second.codomain_, std::move( v ) );
  }

private:
  ContinuousMap( FiniteSpace domain, FiniteSpace codomain, PointMap values, bool certified )
      : domain_( std::move( domain ) ), codomain_( std::move( codomain ) ), values_( std::move( values ) ),
        certified_( certified )
  {
  }

  FiniteSpace domain_;
  FiniteSpace codomain_;
  PointMap values_;
  bool certified_ = false;
  std::optional<PointSet> offending_;
};

/// Calls fn(values) for every point function domain -> codomain, in lexicographic order.
template<typename Fn>
void for_each_point_map( std::size_t domain_size, std::size_t codomain_size, Fn&& fn )
{
  if ( codomain_size == 0 && domain_size > 0 )
    return;
  PointMap v( domain_size, 0 );
  while ( true )
  {
    fn( static_cast<const PointMap&>( v ) );
    std::size_t i = domain_size;
    while ( i > 0 )
    {
      --i;
      if ( ++v[i] < codomain_size )
        break;
      v[i] = 0;
      if ( i == 0 )
        return;
    }
    if ( domain_size == 0 )
      return;
  }
}

/// All continuous maps between two spaces, in lexicographic order of their values.
inline std::vector<ContinuousMap> continuous_maps( const FiniteSpace& domain, const FiniteSpace& codomain )
{
  std::vector<ContinuousMap> out;
  for_each_point_map( domain.size(), codomain.size(), [&]( const PointMap& v ) {
    bool ok = true;
    for ( auto u : codomain.open_masks() )
    {
      if ( !domain.is_open( preimage( v, u ) ) )
      {
        ok = false;
        break;
      }
    }
    if ( ok )
      out.emplace_back( domain, codomain, v );
  } );
  return out;
}

} // namespace topoforge
