#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "suite.hpp"

namespace topoforge::io
{

using json = nlohmann::json;

inline json load_json( const std::filesystem::path& path )
{
  std::ifstream in( path );
  if ( !in )
    throw input_error( path.string() + ": cannot open file" );
  try
  {
    return json::parse( in );
  }
  catch ( const json::parse_error& e )
  {
    throw input_error( path.string() + ": " + e.what() );
  }
}

inline void save_text( const std::filesystem::path& path, const std::string& text )
{
  std::ofstream out( path );
  if ( !out || !( out << text ) )
    throw input_error( path.string() + ": cannot write file" );
}

namespace detail
{

inline std::size_t natural( const json& j, const std::string& field )
{
  if ( !j.is_number_integer() || j.get<long long>() < 0 )
    throw input_error( field + ": expected a natural number, got " + j.dump() );
  return j.get<std::size_t>();
}

inline const json& member( const json& j, const char* key, const std::string& where )
{
  if ( !j.is_object() )
    throw input_error( where + ": expected an object" );
  if ( !j.contains( key ) )
    throw input_error( where + ": missing field \"" + key + "\"" );
  return j.at( key );
}

/// A list of point indices below n, as a mask.
inline Mask index_list( const json& j, std::size_t n, const std::string& field )
{
  if ( !j.is_array() )
    throw input_error( field + ": expected a list of point indices" );
  Mask m = 0;
  for ( std::size_t i = 0; i < j.size(); ++i )
  {
    const auto x = natural( j[i], field + "[" + std::to_string( i ) + "]" );
    if ( x >= n )
      throw input_error( field + "[" + std::to_string( i ) + "]: index " + std::to_string( x ) + " out of range for n = " +
                         std::to_string( n ) );
    m |= bits::single( x );
  }
  return m;
}

inline json mask_list( Mask m )
{
  return bits::members( m );
}

} // namespace detail

struct SpaceDocument
{
  FiniteSpace space;
  std::vector<std::string> labels;
  /// Set for power-set spaces: the ground set size.
  std::optional<std::size_t> ground;

  std::string label( std::size_t x ) const { return labels.empty() ? std::to_string( x ) : labels.at( x ); }

  std::string set_text( Mask m ) const
  {
    std::string out = "{";
    bool first = true;
    bits::for_each( m, [&]( std::size_t x ) {
      out += ( first ? "" : "," ) + label( x );
      first = false;
    } );
    return out + "}";
  }
};

inline SpaceDocument parse_space( const json& j, const std::string& where = "space" )
{
  SpaceDocument doc;
  const auto n = detail::natural( detail::member( j, "n", where ), where + ".n" );
  if ( n > max_universe )
    throw resource_error( where + ".n: " + std::to_string( n ) + " points exceeds the 64-point limit" );
  const auto& opens = detail::member( j, "opens", where );
  if ( !opens.is_array() )
    throw input_error( where + ".opens: expected a list of lists" );
  std::vector<Mask> masks;
  for ( std::size_t i = 0; i < opens.size(); ++i )
    masks.push_back( detail::index_list( opens[i], n, where + ".opens[" + std::to_string( i ) + "]" ) );
  const auto report = verify_axioms( n, masks );
  if ( !report.all() )
    throw input_error( where + ".opens: " + report.first_failure() );
  doc.space = n == 0 ? FiniteSpace() : FiniteSpace::from_opens( n, std::move( masks ) );
  if ( j.contains( "labels" ) )
  {
    const auto& labels = j.at( "labels" );
    if ( !labels.is_array() || labels.size() != n )
      throw input_error( where + ".labels: expected " + std::to_string( n ) + " strings" );
    for ( std::size_t i = 0; i < n; ++i )
    {
      if ( !labels[i].is_string() )
        throw input_error( where + ".labels[" + std::to_string( i ) + "]: expected a string" );
      doc.labels.push_back( labels[i].get<std::string>() );
    }
  }
  if ( j.contains( "ground" ) )
    doc.ground = detail::natural( detail::member( j.at( "ground" ), "size", where + ".ground" ), where + ".ground.size" );
  return doc;
}

inline SpaceDocument load_space( const std::filesystem::path& path )
{
  return parse_space( load_json( path ), path.string() );
}

/// Opens in the space's canonical order, each as a sorted index list.
inline json space_json( const FiniteSpace& space, const std::vector<std::string>& labels = {} )
{
  json j;
  j["n"] = space.size();
  j["opens"] = json::array();
  for ( auto m : space.open_masks() )
    j["opens"].push_back( detail::mask_list( m ) );
  if ( !labels.empty() )
    j["labels"] = labels;
  return j;
}

/// The puf space with each point spelled out as the subset of the ground set it codes.
inline json puf_json( std::size_t ground_size )
{
  const auto& p = cached_puf_space( ground_size );
  auto j = space_json( p.space );
  json points = json::array();
  for ( std::size_t a = 0; a < p.space.size(); ++a )
    points.push_back( detail::mask_list( a ) );
  j["ground"] = { { "size", ground_size }, { "points", points } };
  return j;
}

/// { "domain": m | "points", "sets": [[...], ...] }
inline SetAssignment parse_assignment( const json& j, const FiniteSpace& space, const std::string& where = "assignment" )
{
  const auto& domain = detail::member( j, "domain", where );
  const auto& sets = detail::member( j, "sets", where );
  if ( !sets.is_array() )
    throw input_error( where + ".sets: expected a list of lists" );
  IndexDomain kind = IndexDomain::abstract;
  if ( domain.is_string() )
  {
    if ( domain.get<std::string>() != "points" )
      throw input_error( where + ".domain: expected a natural number or \"points\"" );
    kind = IndexDomain::points;
    if ( sets.size() != space.size() )
      throw input_error( where + ".sets: expected one set per point (" + std::to_string( space.size() ) + "), got " +
                         std::to_string( sets.size() ) );
  }
  else if ( detail::natural( domain, where + ".domain" ) != sets.size() )
    throw input_error( where + ".sets: expected " + domain.dump() + " sets, got " + std::to_string( sets.size() ) );
  std::vector<PointSet> out;
  for ( std::size_t i = 0; i < sets.size(); ++i )
  {
    const auto where_i = where + ".sets[" + std::to_string( i ) + "]";
    const Mask m = detail::index_list( sets[i], space.size(), where_i );
    if ( !space.is_open( m ) )
      throw input_error( where_i + ": " + PointSet( space.size(), m ).to_string() + " is not open" );
    out.emplace_back( space.size(), m );
  }
  return SetAssignment( space, std::move( out ), kind );
}

inline json assignment_json( const SetAssignment& a )
{
  json j;
  if ( a.index_domain() == IndexDomain::points )
    j["domain"] = "points";
  else
    j["domain"] = a.domain_size();
  j["sets"] = json::array();
  for ( auto m : a.masks() )
    j["sets"].push_back( detail::mask_list( m ) );
  return j;
}

struct MapDocument
{
  SpaceDocument from;
  SpaceDocument to;
  ContinuousMap map;
};

/// { "from": FILE, "to": FILE, "values": [...] }; paths resolve against the document's directory.
inline MapDocument load_map( const std::filesystem::path& path )
{
  const auto j = load_json( path );
  const auto where = path.string();
  auto resolve = [&]( const char* key ) {
    const auto& v = detail::member( j, key, where );
    if ( !v.is_string() )
      throw input_error( where + "." + key + ": expected a file name" );
    std::filesystem::path p( v.get<std::string>() );
    return p.is_absolute() ? p : path.parent_path() / p;
  };
  MapDocument doc;
  doc.from = load_space( resolve( "from" ) );
  doc.to = load_space( resolve( "to" ) );
  const auto& values = detail::member( j, "values", where );
  if ( !values.is_array() || values.size() != doc.from.space.size() )
    throw input_error( where + ".values: expected " + std::to_string( doc.from.space.size() ) + " point indices" );
  PointMap v;
  for ( std::size_t i = 0; i < values.size(); ++i )
  {
    const auto y = detail::natural( values[i], where + ".values[" + std::to_string( i ) + "]" );
    if ( y >= doc.to.space.size() )
      throw input_error( where + ".values[" + std::to_string( i ) + "]: index " + std::to_string( y ) +
                         " out of range for the target space" );
    v.push_back( y );
  }
  doc.map = ContinuousMap( doc.from.space, doc.to.space, std::move( v ) );
  return doc;
}

inline json optional_bool( const std::optional<bool>& b )
{
  return b ? json( *b ) : json( nullptr );
}

inline json fingerprint_json( const Fingerprint& f )
{
  return { { "t0", f.t0 },
           { "t1", f.t1 },
           { "extent", f.extent },
           { "lindelof", f.lindelof },
           { "exclusiveness", f.exclusiveness },
           { "d", to_string( f.d ) },
           { "d_checked", f.d_checked },
           { "d_total", f.d_total },
           { "ad", f.ad },
           { "gls", optional_bool( f.gls ) },
           { "left_separated", optional_bool( f.left_separated ) },
           { "opens", f.open_count } };
}

/// One catalog line. The hash is written as hex text so it survives 53-bit JSON readers.
inline json record_json( const CatalogRecord& r )
{
  std::ostringstream hash;
  hash << std::hex << r.canonical_hash;
  json j = space_json( r.space );
  j["canonical_hash"] = hash.str();
  j["fingerprint"] = fingerprint_json( r.fingerprint );
  json w = json::object();
  if ( r.d_counterexample )
  {
    w["d_counterexample"] = json::array();
    for ( auto m : *r.d_counterexample )
      w["d_counterexample"].push_back( detail::mask_list( m ) );
  }
  if ( r.gls_witness )
  {
    w["gls_up_sets"] = json::array();
    for ( auto m : *r.gls_witness )
      w["gls_up_sets"].push_back( detail::mask_list( m ) );
  }
  if ( r.order_witness )
    w["left_separated_order"] = *r.order_witness;
  j["witnesses"] = w;
  return j;
}

inline json suite_json( const SuiteReport& r )
{
  json j;
  j["max_n"] = r.max_n;
  j["seed"] = r.seed;
  j["violations"] = r.violations();
  j["findings"] = r.findings();
  j["millis"] = r.millis;
  j["theorems"] = json::array();
  for ( const auto& t : r.theorems )
    j["theorems"].push_back( { { "id", t.id },
                               { "statement", t.statement },
                               { "passed", t.passed() },
                               { "instances", t.instances },
                               { "violations", t.violations },
                               { "findings", t.findings },
                               { "first_violation", t.first_violation },
                               { "note", t.note },
                               { "millis", t.millis } } );
  return j;
}

} // namespace topoforge::io
