#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace topoforge
{

/// Raw subset of {0..63}; bit i set means point i is a member.
using Mask = std::uint64_t;

inline constexpr std::size_t max_universe = 64;

namespace bits
{

constexpr Mask full( std::size_t n ) noexcept
{
  return n >= 64 ? ~Mask{ 0 } : ( Mask{ 1 } << n ) - 1u;
}

constexpr Mask single( std::size_t i ) noexcept
{
  return Mask{ 1 } << i;
}

constexpr bool has( Mask m, std::size_t i ) noexcept
{
  return ( m >> i ) & 1u;
}

constexpr std::size_t count( Mask m ) noexcept
{
  return static_cast<std::size_t>( std::popcount( m ) );
}

constexpr bool subset( Mask a, Mask b ) noexcept
{
  return ( a & ~b ) == 0;
}

/// Calls fn(i) for every set bit, lowest first.
template<typename Fn>
constexpr void for_each( Mask m, Fn&& fn )
{
  while ( m != 0 )
  {
    fn( static_cast<std::size_t>( std::countr_zero( m ) ) );
    m &= m - 1;
  }
}

/// Canonical order used everywhere opens are sorted: by cardinality, then numeric value.
constexpr bool canonical_less( Mask a, Mask b ) noexcept
{
  const auto ca = std::popcount( a );
  const auto cb = std::popcount( b );
  return ca != cb ? ca < cb : a < b;
}

/// Squeezes the bits of m selected by `select` into the low positions (software pext).
constexpr Mask compress( Mask m, Mask select ) noexcept
{
  Mask out = 0;
  std::size_t k = 0;
  for_each( select, [&]( std::size_t i ) {
    if ( has( m, i ) )
      out |= single( k );
    ++k;
  } );
  return out;
}

/// Inverse of compress: spreads the low bits of m onto the positions of `select`.
constexpr Mask expand( Mask m, Mask select ) noexcept
{
  Mask out = 0;
  std::size_t k = 0;
  for_each( select, [&]( std::size_t i ) {
    if ( has( m, k ) )
      out |= single( i );
    ++k;
  } );
  return out;
}

inline std::vector<std::size_t> members( Mask m )
{
  std::vector<std::size_t> out;
  out.reserve( count( m ) );
  for_each( m, [&]( std::size_t i ) { out.push_back( i ); } );
  return out;
}

} // namespace bits

/*! \brief Subset of the ground set {0, ..., universe-1}.

  Set algebra between sets of different universes throws input_error; a PointSet is
  never silently reinterpreted in another ground set.
*/
class PointSet
{
public:
  constexpr PointSet() noexcept = default;

  PointSet( std::size_t universe, Mask members )
      : universe_( check_universe( universe ) ), bits_( members )
  {
    if ( ( members & ~bits::full( universe ) ) != 0 )
      throw input_error( "point set has a member outside universe of size " + std::to_string( universe ) );
  }

  PointSet( std::size_t universe, std::initializer_list<std::size_t> members )
      : universe_( check_universe( universe ) )
  {
    for ( auto i : members )
    {
      if ( i >= universe )
        throw input_error( "point " + std::to_string( i ) + " outside universe of size " + std::to_string( universe ) );
      bits_ |= bits::single( i );
    }
  }

  static PointSet empty( std::size_t universe ) { return PointSet( universe, Mask{ 0 } ); }
  static PointSet full( std::size_t universe ) { return PointSet( universe, bits::full( universe ) ); }
  static PointSet singleton( std::size_t universe, std::size_t i ) { return PointSet( universe, { i } ); }

  static PointSet from_indices( std::size_t universe, const std::vector<std::size_t>& members )
  {
    PointSet s = empty( universe );
    for ( auto i : members )
    {
      if ( i >= universe )
        throw input_error( "point " + std::to_string( i ) + " outside universe of size " + std::to_string( universe ) );
      s.bits_ |= bits::single( i );
    }
    return s;
  }

  constexpr std::size_t universe() const noexcept { return universe_; }
  constexpr Mask mask() const noexcept { return bits_; }
  constexpr std::size_t size() const noexcept { return bits::count( bits_ ); }
  constexpr bool is_empty() const noexcept { return bits_ == 0; }
  constexpr bool is_full() const noexcept { return bits_ == bits::full( universe_ ); }

  constexpr bool contains( std::size_t i ) const noexcept { return i < universe_ && bits::has( bits_, i ); }

  PointSet with( std::size_t i ) const { return *this | singleton( universe_, i ); }
  PointSet without( std::size_t i ) const { return *this - singleton( universe_, i ); }

  PointSet complement() const { return PointSet( universe_, ~bits_ & bits::full( universe_ ) ); }

  bool is_subset_of( const PointSet& other ) const
  {
    same_universe( other );
    return bits::subset( bits_, other.bits_ );
  }

  bool intersects( const PointSet& other ) const
  {
    same_universe( other );
    return ( bits_ & other.bits_ ) != 0;
  }

  std::vector<std::size_t> members() const { return bits::members( bits_ ); }

  friend PointSet operator|( const PointSet& a, const PointSet& b )
  {
    a.same_universe( b );
    return PointSet( a.universe_, a.bits_ | b.bits_ );
  }
  friend PointSet operator&( const PointSet& a, const PointSet& b )
  {
    a.same_universe( b );
    return PointSet( a.universe_, a.bits_ & b.bits_ );
  }
  friend PointSet operator-( const PointSet& a, const PointSet& b )
  {
    a.same_universe( b );
    return PointSet( a.universe_, a.bits_ & ~b.bits_ );
  }

  friend bool operator==( const PointSet&, const PointSet& ) = default;

  /// Orders by universe, then cardinality, then numeric value.
  friend std::strong_ordering operator<=>( const PointSet& a, const PointSet& b )
  {
    if ( auto c = a.universe_ <=> b.universe_; c != 0 )
      return c;
    if ( a.bits_ == b.bits_ )
      return std::strong_ordering::equal;
    return bits::canonical_less( a.bits_, b.bits_ ) ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  std::string to_string() const
  {
    std::string out = "{";
    bool first = true;
    bits::for_each( bits_, [&]( std::size_t i ) {
      if ( !first )
        out += ",";
      out += std::to_string( i );
      first = false;
    } );
    return out + "}";
  }

  void same_universe( const PointSet& other ) const
  {
    if ( universe_ != other.universe_ )
      throw input_error( "universe mismatch: " + std::to_string( universe_ ) + " vs " + std::to_string( other.universe_ ) );
  }

private:
  static std::size_t check_universe( std::size_t universe )
  {
    if ( universe > max_universe )
      throw resource_error( "universe of size " + std::to_string( universe ) + " exceeds the " +
                            std::to_string( max_universe ) + "-point word limit" );
    return universe;
  }

  std::size_t universe_ = 0;
  Mask bits_ = 0;
};

inline std::ostream& operator<<( std::ostream& os, const PointSet& s )
{
  return os << s.to_string();
}

} // namespace topoforge
