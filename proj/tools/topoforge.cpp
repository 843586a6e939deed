#include <topoforge/cli.hpp>

int main( int argc, char** argv )
{
  return topoforge::cli::run( argc, argv );
}
