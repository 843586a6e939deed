#pragma once

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"

namespace topoforge::cli
{

enum exit_code : int
{
  success = 0,
  violation = 1,
  bad_input = 2
};

namespace detail
{

using io::json;

inline std::vector<std::string> split_list( const std::string& s )
{
  std::vector<std::string> out;
  std::stringstream ss( s );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    item.erase( std::remove_if( item.begin(), item.end(), []( unsigned char c ) { return std::isspace( c ); } ), item.end() );
    if ( !item.empty() )
      out.push_back( item );
  }
  return out;
}

inline const std::vector<std::string>& all_props()
{
  static const std::vector<std::string> props{ "t0", "t1", "extent", "lindelof", "exclusiveness", "d", "ad", "gls", "left_sep", "opens" };
  return props;
}

inline std::string yes_no( bool b )
{
  return b ? "yes" : "no";
}

inline std::string assignment_text( const io::SpaceDocument& doc, const std::vector<Mask>& nb )
{
  std::string out;
  for ( std::size_t x = 0; x < nb.size(); ++x )
    out += ( x ? ", " : "" ) + std::string( "N(" ) + doc.label( x ) + ") = " + doc.set_text( nb[x] );
  return out;
}

struct CheckOptions
{
  std::string space;
  bool all = false;
  std::string props;
  std::uint64_t cap = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t samples = 2000;
  bool json = false;
};

inline int run_check( const CheckOptions& o, std::ostream& out, std::ostream& err )
{
  const auto doc = io::load_space( o.space );
  const auto& s = doc.space;
  std::vector<std::string> props = o.all || o.props.empty() ? all_props() : split_list( o.props );
  for ( const auto& p : props )
    if ( std::find( all_props().begin(), all_props().end(), p ) == all_props().end() )
      throw input_error( "unknown property \"" + p + "\"; expected one of t0,t1,extent,lindelof,exclusiveness,d,ad,gls,left_sep,opens" );
  auto wanted = [&]( const char* p ) { return std::find( props.begin(), props.end(), p ) != props.end(); };

  json j;
  std::ostringstream text;
  int code = success;
  std::optional<std::size_t> e, l;
  std::optional<DStatus> d;
  if ( wanted( "t0" ) || wanted( "t1" ) )
  {
    const auto sep = separation_level( s );
    if ( wanted( "t0" ) )
    {
      j["t0"] = sep.t0;
      text << "T0: " << yes_no( sep.t0 ) << "\n";
    }
    if ( wanted( "t1" ) )
    {
      j["t1"] = sep.t1;
      text << "T1: " << yes_no( sep.t1 ) << "\n";
    }
  }
  if ( wanted( "extent" ) )
  {
    e = extent( s );
    j["extent"] = *e;
    text << "extent: " << *e << "\n";
  }
  if ( wanted( "lindelof" ) )
  {
    const auto r = lindelof_degree( s, 8 );
    l = r.degree;
    j["lindelof"] = r.degree;
    text << "Lindelof degree: " << r.degree;
    if ( r.quantifier_degree )
      text << " (quantifier route " << *r.quantifier_degree << ")";
    text << "\n";
    if ( !r.agrees() )
    {
      text << "violation: Lindelof routes disagree\n";
      code = violation;
    }
  }
  if ( wanted( "exclusiveness" ) )
  {
    const auto r = exclusiveness( s );
    j["exclusiveness"] = r.value();
    text << "exclusiveness: " << r.value() << "\n";
    if ( !r.agrees() )
    {
      text << "violation: exclusiveness routes disagree\n";
      code = violation;
    }
  }
  if ( wanted( "d" ) )
  {
    const auto v = dspace_check( s, { .cap = o.cap, .seed = o.seed, .samples = o.samples } );
    d = v.status;
    j["d"] = to_string( v.status );
    j["d_checked"] = v.assignments_checked;
    j["d_total"] = v.assignments_total;
    text << "D: " << to_string( v.status );
    if ( v.status == DStatus::yes )
      text << " (all " << v.assignments_total << " neighborhood assignments have a closed discrete kernel)";
    else if ( v.status == DStatus::unknown_sampled )
      text << " (" << v.assignments_checked << " sampled of " << v.assignments_total << " assignments, no counterexample)";
    text << "\n";
    if ( v.counterexample )
    {
      j["counterexample"] = json::array();
      for ( auto m : *v.counterexample )
        j["counterexample"].push_back( bits::members( m ) );
      text << "counterexample: " << assignment_text( doc, *v.counterexample ) << "\n";
    }
  }
  if ( wanted( "ad" ) )
  {
    const bool ad = is_aD( s );
    j["ad"] = ad;
    text << "aD: " << yes_no( ad ) << "\n";
  }
  if ( wanted( "gls" ) )
  {
    if ( s.size() > gls_cap() )
    {
      j["gls"] = nullptr;
      text << "GLS: unknown (search is capped at n = " << gls_cap() << ")\n";
    }
    else
    {
      const auto g = gls_search( s );
      j["gls"] = g.has_value();
      text << "GLS: " << yes_no( g.has_value() ) << "\n";
    }
  }
  if ( wanted( "left_sep" ) )
  {
    if ( s.size() > left_separated_cap() )
    {
      j["left_separated"] = nullptr;
      text << "left-separated: unknown (search is capped at n = " << left_separated_cap() << ")\n";
    }
    else
    {
      const auto order = left_separated_search( s );
      j["left_separated"] = order.has_value();
      text << "left-separated: " << yes_no( order.has_value() );
      if ( order )
        text << " (order " << render_order( *order ) << ")";
      text << "\n";
    }
  }
  if ( wanted( "opens" ) )
  {
    j["opens"] = s.open_count();
    text << "opens: " << s.open_count() << "\n";
  }
  if ( e && l && ( *e > *l || ( d == DStatus::yes && *e != *l ) ) )
  {
    text << "violation: extent " << *e << " against Lindelof degree " << *l << "\n";
    code = violation;
  }
  if ( o.json )
  {
    j["violation"] = code == violation;
    out << j.dump( 2 ) << "\n";
  }
  else
    out << text.str();
  if ( code == violation )
    err << "check: certification failed\n";
  return code;
}

struct PufOptions
{
  std::size_t n = 0;
  std::string out;
  bool oracle = false;
};

inline int run_puf( const PufOptions& o, std::ostream& out, std::ostream& )
{
  if ( o.n > 4 )
    throw resource_error( "puf is capped at n = 4 (2^n points), got " + std::to_string( o.n ) );
  require_power_set_cap( o.n );
  const auto& p = cached_puf_space( o.n );
  out << "puf n=" << o.n << ": " << p.space.size() << " points, " << p.space.open_count() << " opens\n";
  if ( o.oracle )
  {
    const bool equal = upset_oracle( o.n ) == p.space;
    out << "oracle: " << ( equal ? "equal" : "MISMATCH" ) << "\n";
    if ( !equal )
      return violation;
  }
  io::save_text( o.out, io::puf_json( o.n ).dump( 2 ) + "\n" );
  out << "wrote " << o.out << "\n";
  return success;
}

struct KernelOptions
{
  std::string space;
  std::string assignment;
  bool greedy = false;
  bool greedy_all = false;
  bool brute = false;
  std::string order;
  bool json = false;
};

inline int run_kernel( const KernelOptions& o, std::ostream& out, std::ostream& )
{
  const auto doc = io::load_space( o.space );
  const auto& s = doc.space;
  const auto a = io::parse_assignment( io::load_json( o.assignment ), s, o.assignment );
  if ( a.index_domain() != IndexDomain::points )
    throw input_error( o.assignment + ": kernel needs one set per point (\"domain\": \"points\")" );
  for ( std::size_t x = 0; x < s.size(); ++x )
    if ( !bits::has( a.mask( x ), x ) )
      throw input_error( o.assignment + ": N(" + doc.label( x ) + ") = " + doc.set_text( a.mask( x ) ) + " does not contain " +
                         doc.label( x ) );
  json j;
  std::ostringstream text;
  if ( o.greedy )
  {
    auto order = identity_order( s.size() );
    if ( !o.order.empty() )
    {
      order.clear();
      for ( const auto& item : split_list( o.order ) )
      {
        std::size_t pos = 0;
        unsigned long v = 0;
        try
        {
          v = std::stoul( item, &pos );
        }
        catch ( const std::exception& )
        {
          pos = 0;
        }
        if ( pos != item.size() )
          throw input_error( "--order: \"" + item + "\" is not a point index" );
        order.push_back( v );
      }
    }
    const auto g = greedy_kernel( a, order );
    j["mode"] = "greedy";
    j["trace"] = g.render();
    j["kernel"] = g.success ? json( bits::members( g.kernel ) ) : json( nullptr );
    text << "mode: greedy\n" << g.render() << "kernel: " << ( g.success ? doc.set_text( g.kernel ) : "none" ) << "\n";
  }
  else if ( o.greedy_all )
  {
    const auto r = greedy_kernel_all_orders( a );
    j["mode"] = "greedy-all";
    j["orders_tried"] = r.orders_tried;
    text << "mode: greedy-all\norders tried: " << r.orders_tried << "\n";
    if ( r.first_success )
    {
      j["kernel"] = bits::members( r.first_success->kernel );
      j["order"] = r.first_success->order;
      j["trace"] = r.first_success->render();
      text << r.first_success->render() << "kernel: " << doc.set_text( r.first_success->kernel ) << " via order "
           << render_order( r.first_success->order ) << "\n";
    }
    else
    {
      j["kernel"] = nullptr;
      text << "kernel: none\n";
    }
  }
  else
  {
    const auto k = kernel_search( a );
    j["mode"] = "brute";
    j["kernel"] = k ? json( k->members() ) : json( nullptr );
    text << "mode: brute\nkernel: " << ( k ? doc.set_text( k->mask() ) : "none" ) << "\n";
  }
  out << ( o.json ? j.dump( 2 ) + "\n" : text.str() );
  return success;
}

struct CatalogOptions
{
  std::size_t n = 0;
  bool unlabeled = false;
  std::string out;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

inline int run_catalog( const CatalogOptions& o, std::ostream& out, std::ostream& err )
{
  const auto spaces = enumerate_topologies( o.n, o.unlabeled ? EnumerationMode::unlabeled : EnumerationMode::labeled );
  FingerprintBudget budget;
  budget.seed = o.seed;
  const auto records = fingerprint_all( spaces, budget, o.jobs );
  std::string lines;
  std::size_t broken = 0;
  for ( const auto& r : records )
  {
    lines += io::record_json( r ).dump() + "\n";
    broken += r.invariants_hold() ? 0 : 1;
  }
  io::save_text( o.out, lines );
  out << "wrote " << records.size() << " records to " << o.out << "\n";
  if ( broken )
  {
    err << "catalog: " << broken << " records violate the fingerprint invariants\n";
    return violation;
  }
  return success;
}

struct SuiteOptions
{
  std::size_t max_n = 3;
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  std::size_t jobs = 1;
  bool json = false;
};

inline int run_suite_command( const SuiteOptions& o, std::ostream& out, std::ostream& )
{
  SuiteConfig c;
  c.max_n = o.max_n;
  c.seed = o.seed;
  c.samples = o.samples;
  c.jobs = o.jobs;
  c.budget.seed = o.seed;
  const auto r = run_suite( c );
  out << ( o.json ? io::suite_json( r ).dump( 2 ) + "\n" : r.render() );
  return r.violations() ? violation : success;
}

struct MapOptions
{
  std::string map;
  bool json = false;
};

inline int run_map( const MapOptions& o, std::ostream& out, std::ostream& err )
{
  const auto doc = io::load_map( o.map );
  const auto& f = doc.map;
  json j;
  std::ostringstream text;
  j["continuous"] = f.certified();
  text << "continuous: " << yes_no( f.certified() );
  if ( !f.certified() )
  {
    text << " (preimage of " << doc.to.set_text( f.offending_open()->mask() ) << " is not open)\n";
    j["offending_open"] = f.offending_open()->members();
    out << ( o.json ? j.dump( 2 ) + "\n" : text.str() );
    err << "map: not continuous\n";
    return violation;
  }
  text << "\n";
  int code = success;
  const auto mono = is_mono( f );
  const auto epi = is_epi( f );
  j["injective"] = mono.concrete;
  j["mono"] = mono.categorical;
  j["surjective"] = epi.concrete;
  j["epi"] = epi.categorical;
  j["closed"] = f.is_closed_map();
  text << "injective: " << yes_no( mono.concrete ) << ", mono: " << yes_no( mono.categorical ) << "\n"
       << "surjective: " << yes_no( epi.concrete ) << ", epi: " << yes_no( epi.categorical ) << "\n"
       << "closed: " << yes_no( f.is_closed_map() ) << "\n";
  if ( !mono.agrees() || !epi.agrees() )
  {
    text << "violation: mono/epi routes disagree\n";
    code = violation;
  }
  if ( epi.concrete && f.is_closed_map() )
  {
    const auto r = closed_image_transfer( f );
    j["domain_d"] = to_string( r.domain.status );
    j["codomain_d"] = to_string( r.codomain.status );
    text << "D: domain " << to_string( r.domain.status ) << ", image " << to_string( r.codomain.status ) << "\n";
    if ( r.violation )
    {
      text << "violation: closed image of a D-space is not D\n";
      code = violation;
    }
  }
  out << ( o.json ? j.dump( 2 ) + "\n" : text.str() );
  return code;
}

} // namespace detail

/// Runs one command line (without the program name). Never throws.
inline int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "topoforge: finite topological spaces, covering properties and D-space certificates", "topoforge" };
  app.require_subcommand( 1 );

  detail::CheckOptions check;
  auto* c = app.add_subcommand( "check", "Print fingerprint properties of a space" );
  c->add_option( "--space", check.space, "SpaceDocument file" )->required();
  c->add_flag( "--all", check.all, "All properties (the default)" );
  c->add_option( "--props", check.props, "Comma list of t0,t1,extent,lindelof,exclusiveness,d,ad,gls,left_sep,opens" );
  c->add_option( "--cap", check.cap, "Exhaustive D check up to this many assignments" );
  c->add_option( "--seed", check.seed, "Seed for sampled D checks" );
  c->add_option( "--samples", check.samples, "Samples when the D check is over the cap" );
  c->add_flag( "--json", check.json, "JSON output" );

  detail::PufOptions puf;
  auto* p = app.add_subcommand( "puf", "Write the puf space over an n-point ground set" );
  p->add_option( "--n", puf.n, "Ground set size (at most 4)" )->required();
  p->add_option( "--out", puf.out, "Output file" )->required();
  p->add_flag( "--oracle", puf.oracle, "Compare with the up-set oracle before writing" );

  detail::KernelOptions kernel;
  auto* k = app.add_subcommand( "kernel", "Find a closed discrete kernel of a neighborhood assignment" );
  k->add_option( "--space", kernel.space, "SpaceDocument file" )->required();
  k->add_option( "--assignment", kernel.assignment, "AssignmentDocument file" )->required();
  auto* g1 = k->add_flag( "--greedy", kernel.greedy, "Greedy recursion in one order" );
  auto* g2 = k->add_flag( "--greedy-all", kernel.greedy_all, "Greedy recursion over all orders" );
  auto* g3 = k->add_flag( "--brute", kernel.brute, "Exhaustive search (the default)" );
  g1->excludes( g2 )->excludes( g3 );
  g2->excludes( g3 );
  k->add_option( "--order", kernel.order, "Point order for --greedy, e.g. 1,0" )->needs( g1 );
  k->add_flag( "--json", kernel.json, "JSON output" );

  detail::CatalogOptions catalog;
  auto* cat = app.add_subcommand( "catalog", "Write fingerprint records for every topology on n points" );
  cat->add_option( "--n", catalog.n, "Number of points (at most 5)" )->required();
  cat->add_flag( "--unlabeled", catalog.unlabeled, "One record per homeomorphism class" );
  cat->add_option( "--out", catalog.out, "JSON-lines output file" )->required();
  cat->add_option( "--jobs", catalog.jobs, "Worker threads" )->check( CLI::PositiveNumber );
  cat->add_option( "--seed", catalog.seed, "Seed for sampled D checks" );

  detail::SuiteOptions suite;
  auto* su = app.add_subcommand( "suite", "Replay every invariant over the catalog" );
  su->add_option( "--max-n", suite.max_n, "Largest space size (at most 4)" );
  su->add_option( "--seed", suite.seed, "Seed for budgeted samples" );
  su->add_option( "--samples", suite.samples, "Random instances per budgeted check" );
  su->add_option( "--jobs", suite.jobs, "Worker threads" )->check( CLI::PositiveNumber );
  su->add_flag( "--json", suite.json, "JSON output" );

  detail::MapOptions map;
  auto* m = app.add_subcommand( "map", "Certify a map between two spaces" );
  m->add_option( "--map", map.map, "MapDocument file" )->required();
  m->add_flag( "--json", map.json, "JSON output" );

  std::vector<std::string> reversed( args.rbegin(), args.rend() );
  try
  {
    app.parse( reversed );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e, out, err );
    return code == 0 ? success : bad_input;
  }

  try
  {
    if ( c->parsed() )
      return detail::run_check( check, out, err );
    if ( p->parsed() )
      return detail::run_puf( puf, out, err );
    if ( k->parsed() )
      return detail::run_kernel( kernel, out, err );
    if ( cat->parsed() )
      return detail::run_catalog( catalog, out, err );
    if ( su->parsed() )
      return detail::run_suite_command( suite, out, err );
    if ( m->parsed() )
      return detail::run_map( map, out, err );
  }
  catch ( const certification_failure& e )
  {
    err << "certification failure: " << e.what() << "\n";
    return violation;
  }
  catch ( const resource_error& e )
  {
    err << "resource error: " << e.what() << "\n";
    return bad_input;
  }
  catch ( const input_error& e )
  {
    err << "input error: " << e.what() << "\n";
    return bad_input;
  }
  catch ( const precondition_violation& e )
  {
    err << "input error: " << e.what() << "\n";
    return bad_input;
  }
  catch ( const io::json::exception& e )
  {
    err << "input error: " << e.what() << "\n";
    return bad_input;
  }
  return bad_input;
}

inline int run( int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr )
{
  return run( std::vector<std::string>( argv + 1, argv + argc ), out, err );
}

} // namespace topoforge::cli
