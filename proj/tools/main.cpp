#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

#include "isotree/enumeration.hpp"
#include "isotree/samplers.hpp"
#include "isotree/singular.hpp"

using namespace isotree::cli;

namespace {

void model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--model", m.model, "labeled | plane | ub | binary121 | full-binary");
  app->add_option("--D", m.D, "allowed out-degrees, e.g. 0,1,2");
  app->add_option("--w", m.w, "weights per degree, rationals allowed, e.g. 1,1/2,1");
}

void range_flags(CLI::App* app, RangeFlags& r) {
  app->add_option("--n", r.n, "tree size");
  app->add_option("--n-min", r.n_min, "first size of a range");
  app->add_option("--n-max", r.n_max, "last size of a range");
}

void output_flags(CLI::App* app, OutputFlags& o, const std::string& formats) {
  app->add_option("--format", o.format, formats)->capture_default_str();
  app->add_option("--output,-o", o.output, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isomorphism probabilities of random trees: exact values, series, Monte Carlo and asymptotics"};
  app.require_subcommand(1);

  ExactArgs exact;
  auto* c_exact = app.add_subcommand("exact", "exact collision probability from the class enumeration");
  model_flags(c_exact, exact.model);
  range_flags(c_exact, exact.range);
  output_flags(c_exact, exact.out, "json | csv");
  c_exact->add_option("--digits", exact.digits, "decimal digits in renderings")->capture_default_str();
  c_exact->add_flag("--classes", exact.classes, "include the per-class table");

  SeriesArgs series;
  auto* c_series = app.add_subcommand("series", "coefficients of the functional equation solution");
  c_series->add_option("--family", series.family, "polya | ub | binary121 | full-binary | degree")
      ->capture_default_str();
  model_flags(c_series, series.model);
  c_series->add_option("--t", series.t, "exponent t (rational literal)")->capture_default_str();
  c_series->add_option("--order", series.order, "highest coefficient")->capture_default_str();
  c_series->add_option("--field", series.field, "rational | real")->capture_default_str();
  c_series->add_option("--precision", series.precision_bits, "bits for --field real");
  c_series->add_option("--oracle-max", series.oracle_max, "largest n compared with the enumeration")
      ->capture_default_str();
  c_series->add_option("--digits", series.digits, "decimal digits for --field real")->capture_default_str();
  output_flags(c_series, series.out, "json | csv");

  McArgs mc;
  auto* c_mc = app.add_subcommand("mc", "Monte Carlo estimate of the collision probability");
  model_flags(c_mc, mc.model);
  range_flags(c_mc, mc.range);
  c_mc->add_option("--samples", mc.samples, "pairs per size")->capture_default_str();
  c_mc->add_option("--seed", mc.seed, "seed")->capture_default_str();
  c_mc->add_option("--stream", mc.stream, "stream id")->capture_default_str();
  c_mc->add_option("--workers", mc.workers, "worker threads")->capture_default_str();
  c_mc->add_option("--interval", mc.interval, "wilson | normal")->capture_default_str();
  c_mc->add_option("--exact-max", mc.exact_max, "largest n compared with the exact value")->capture_default_str();
  c_mc->add_flag("--strict", mc.strict, "exit 2 when an exact value lies outside its interval");
  output_flags(c_mc, mc.out, "json | csv");

  AsymArgs asym;
  auto* c_asym = app.add_subcommand("asym", "asymptotic and limit-law constants");
  c_asym->add_option("--which", asym.which, "labeled | ub | leaf | logweight | aut | degree | all")
      ->capture_default_str();
  model_flags(c_asym, asym.model);
  c_asym->add_option("--degrees", asym.degrees, "marked out-degrees for --which degree")->capture_default_str();
  c_asym->add_option("--law", asym.law, "pairs | gw | labeled for --which degree")->capture_default_str();
  c_asym->add_option("--order", asym.order, "series truncation order")->capture_default_str();
  c_asym->add_option("--precision", asym.precision_bits, "working precision in bits");
  c_asym->add_option("--fd-step", asym.fd_step, "finite difference step")->capture_default_str();
  c_asym->add_option("--bracket", asym.bracket, "x search window lo,hi");
  c_asym->add_flag("--no-stability", asym.no_stability, "skip the doubled-order recomputation");
  c_asym->add_option("--digits", asym.digits, "digits in value_text")->capture_default_str();
  output_flags(c_asym, asym.out, "json");

  PlaneDecayArgs plane;
  auto* c_plane = app.add_subcommand("plane-decay", "exact plane-tree collision table");
  c_plane->add_option("--n-max", plane.n_max, "largest size")->capture_default_str();
  c_plane->add_option("--digits", plane.digits, "decimal digits")->capture_default_str();
  output_flags(c_plane, plane.out, "csv | json");

  RecordsArgs records;
  auto* c_records = app.add_subcommand("records", "per-class records of one size");
  model_flags(c_records, records.model);
  c_records->add_option("--n", records.n, "tree size")->required();
  c_records->add_option("--cache-dir", records.cache_dir, "directory for the binary enumeration cache");
  output_flags(c_records, records.out, "jsonl | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*c_exact) return run_exact(exact);
    if (*c_series) return run_series(series);
    if (*c_mc) return run_mc(mc);
    if (*c_asym) return run_asym(asym);
    if (*c_plane) return run_plane_decay(plane);
    if (*c_records) return run_records(records);
  } catch (const isotree::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceCeiling;
  } catch (const isotree::SingularSolveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kToleranceBreach;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
