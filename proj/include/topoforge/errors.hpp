#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace topoforge
{

/// Malformed input: universe mismatch, index out of range, non-open set where an open one is required.
struct input_error : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold for otherwise well-formed input.
struct precondition_violation : std::logic_error
{
  using std::logic_error::logic_error;
};

/// The request exceeds a configured size cap.
struct resource_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// An internal cross-check disagreed. Seeing one of these means a bug, not bad input.
struct certification_failure : std::logic_error
{
  using std::logic_error::logic_error;
};

/*! \brief Largest power-set exponent the library will materialize.

  Power-set spaces live on 2^bits points. The default of 4 keeps P(P(X)) enumerable;
  the environment variable TOPOFORGE_CAP_BITS overrides it (clamped to [1, 6] since
  point sets are single 64-bit words).
*/
inline unsigned universe_cap_bits()
{
  if ( const char* env = std::getenv( "TOPOFORGE_CAP_BITS" ); env != nullptr && *env != '\0' )
  {
    char* end = nullptr;
    const long v = std::strtol( env, &end, 10 );
    if ( end != env && *end == '\0' )
    {
      if ( v < 1 )
        return 1u;
      if ( v > 6 )
        return 6u;
      return static_cast<unsigned>( v );
    }
  }
  return 4u;
}

} // namespace topoforge
