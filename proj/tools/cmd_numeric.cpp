#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "cli.hpp"

#include "isotree/asymptotics.hpp"
#include "isotree/enumeration.hpp"
#include "isotree/reference.hpp"
#include "isotree/samplers.hpp"

namespace isotree::cli {

namespace {

Json base_config(const std::string& command, const OutputFlags& out) {
  Json c;
  c["command"] = command;
  c["format"] = out.format;
  c["output"] = out.output.empty() ? "-" : out.output;
  return c;
}

McModel mc_model(const ModelSpec& s) {
  switch (s.law) {
    case ModelSpec::Law::labeled: return McModel::labeled();
    case ModelSpec::Law::plane: return McModel::plane();
    case ModelSpec::Law::weighted: return McModel::cgw(s.degrees);
  }
  return McModel::labeled();
}

}  // namespace

// ------------------------------------------------------------------ mc

int run_mc(const McArgs& a) {
  if (a.out.format != "json" && a.out.format != "csv") throw InvalidInput("unsupported --format " + a.out.format);
  if (a.samples == 0) throw InvalidInput("--samples must be at least 1");
  if (a.workers == 0) throw InvalidInput("--workers must be at least 1");
  if (a.interval != "wilson" && a.interval != "normal") throw InvalidInput("--interval is wilson or normal");
  const ModelSpec spec = resolve_model(a.model);
  const std::vector<unsigned> ns = resolve_range(a.range);

  Json config = base_config("mc", a.out);
  config["model"] = spec.to_json();
  config["n"] = ns;
  config["samples"] = a.samples;
  config["seed"] = a.seed;
  config["stream"] = a.stream;
  config["workers"] = a.workers;
  config["interval"] = a.interval;
  config["strict"] = a.strict;
  config["exact_max"] = a.exact_max;

  McOptions opt;
  opt.workers = a.workers;
  opt.interval = a.interval == "wilson" ? IntervalMethod::wilson : IntervalMethod::normal;
  PolyaEnumerator e(spec.model());

  bool all_in = true;
  Json results = Json::array();
  std::ostringstream csv;
  csv << "# config " << config.dump() << "\n"
      << "n,samples,hits,estimate,ci_low,ci_high,method,exact,exact_in_ci\n";
  for (unsigned n : ns) {
    Json row;
    row["n"] = n;
    MCEstimate est;
    try {
      McRunner runner(n, mc_model(spec));
      est = runner.run(a.samples, RngSpec{a.seed, a.stream}, opt);
    } catch (const UnreachableSize&) {
      row["unreachable"] = true;
      results.push_back(row);
      csv << n << ",,,,,,,,\n";
      continue;
    }
    row["samples"] = est.samples;
    row["hits"] = est.hits;
    row["estimate"] = est.estimate;
    row["ci_low"] = est.ci_low;
    row["ci_high"] = est.ci_high;
    row["method"] = est.method;
    std::string exact_text, in_text;
    if (n <= a.exact_max && n <= e.ceiling()) {
      const Rational exact = spec.law == ModelSpec::Law::labeled ? exact_p_labeled(e, n) : exact_p_gw(e, n);
      const double x = exact.convert_to<double>();
      const bool in = est.ci_low <= x && x <= est.ci_high;
      all_in = all_in && in;
      row["exact"] = exact.str();
      row["exact_decimal"] = x;
      row["exact_in_ci"] = in;
      exact_text = exact.str();
      in_text = in ? "true" : "false";
    } else {
      row["exact"] = nullptr;
    }
    results.push_back(row);
    csv << n << "," << est.samples << "," << est.hits << "," << std::setprecision(17) << est.estimate << ","
        << est.ci_low << "," << est.ci_high << "," << est.method << "," << exact_text << "," << in_text << "\n";
  }
  if (a.out.format == "csv") {
    emit(a.out, csv.str());
  } else {
    Json doc;
    doc["command"] = "mc";
    doc["config"] = config;
    doc["results"] = results;
    emit(a.out, dump(doc));
  }
  return a.strict && !all_in ? kToleranceBreach : kOk;
}

// ------------------------------------------------------------------ asym

namespace {

struct ConstantTable {
  Json items = Json::array();
  bool breach = false;
  double stability_tol = 1e-6;
  double richardson_tol = 1e-3;
  int digits = 15;

  Json& add(const std::string& name, const Real& value, const ReferenceValue* ref = nullptr,
            const Stability* stab = nullptr) {
    Json j;
    j["name"] = name;
    j["value"] = value.convert_to<double>();
    j["value_text"] = to_decimal(value, digits);
    if (ref) {
      const double dev = std::abs(value.convert_to<double>() - ref->value);
      const bool ok = dev <= ref->tolerance;
      j["reference"] = ref->value;
      j["tolerance"] = ref->tolerance;
      j["deviation"] = dev;
      j["within_tolerance"] = ok;
      if (!ok) breach = true;
    }
    if (stab && stab->checked) {
      const bool ok = stab->ok(stability_tol);
      j["stability"] = Json{{"at_n", stab->at_n}, {"at_2n", stab->at_2n}, {"rel_change", stab->rel_change}, {"ok", ok}};
      if (!ok) breach = true;
    }
    items.push_back(j);
    return items.back();
  }

  Json& add(const std::string& name, double value, const ReferenceValue* ref = nullptr, const Stability* stab = nullptr) {
    return add(name, Real(value), ref, stab);
  }

  void add_derivative(Json& j, const DerivativeEstimate& d) {
    const bool ok = d.drift < richardson_tol;
    j["richardson"] = Json{{"at_h", d.at_h}, {"at_half_h", d.at_half_h}, {"drift", d.drift}, {"ok", ok}};
    if (!ok) breach = true;
  }
};

Json point_json(const SingularPoint& s) {
  return Json{{"x0", s.x0.convert_to<double>()},
              {"y0", s.y0.convert_to<double>()},
              {"F_x", s.d.Fx.convert_to<double>()},
              {"F_yy", s.d.Fyy.convert_to<double>()},
              {"residual_f", s.residual_f.convert_to<double>()},
              {"residual_g", s.residual_g.convert_to<double>()},
              {"newton_steps", s.newton_steps}};
}

void add_clt(ConstantTable& t, const std::string& prefix, const CltConstants& c, const ReferenceValue* mu_ref,
             const ReferenceValue* s2_ref) {
  Json& mu = t.add(prefix + "mu", c.mu, mu_ref, &c.mu_stability);
  t.add_derivative(mu, c.first);
  Json& s2 = t.add(prefix + "sigma2", c.sigma2, s2_ref, &c.sigma2_stability);
  t.add_derivative(s2, c.second);
  if (c.sigma2 < 0) {
    s2["negative"] = true;
    t.breach = true;
  }
}

const char* law_name(DegreeLaw l) {
  switch (l) {
    case DegreeLaw::isomorphic_pairs: return "pairs";
    case DegreeLaw::galton_watson: return "gw";
    case DegreeLaw::tree_function: return "labeled";
  }
  return "";
}

}  // namespace

int run_asym(const AsymArgs& a) {
  if (a.out.format != "json") throw InvalidInput("asym writes json only");
  if (a.order < 4) throw InvalidInput("--order must be at least 4");
  if (!(a.fd_step > 0 && a.fd_step < 0.1)) throw InvalidInput("--fd-step must be in (0, 0.1)");
  AsymOptions opt;
  opt.order = a.order;
  opt.precision_bits = a.precision_bits ? a.precision_bits : default_precision_bits();
  opt.fd_step = a.fd_step;
  opt.check_stability = !a.no_stability;
  if (!a.bracket.empty()) {
    const auto parts = split(a.bracket, ',');
    SolveHints h;
    try {
      if (parts.size() != 2) throw std::invalid_argument("two values");
      h.x_low = std::stod(parts[0]);
      h.x_high = std::stod(parts[1]);
    } catch (const std::exception&) {
      throw InvalidInput("--bracket expects lo,hi");
    }
    if (!(h.x_low > 0 && h.x_low < h.x_high)) throw InvalidInput("--bracket needs 0 < lo < hi");
    opt.hints = h;
  }

  static const std::vector<std::string> known = {"labeled", "ub", "leaf", "logweight", "aut", "degree", "all"};
  if (std::find(known.begin(), known.end(), a.which) == known.end()) {
    throw InvalidInput("--which is one of labeled, ub, leaf, logweight, aut, degree, all");
  }
  const bool all = a.which == "all";

  Json config = base_config("asym", a.out);
  config["which"] = a.which;
  config["order"] = opt.order;
  config["precision_bits"] = opt.precision_bits;
  config["fd_step"] = opt.fd_step;
  config["bracket"] = a.bracket.empty() ? Json(nullptr) : Json(a.bracket);
  config["stability_check"] = opt.check_stability;
  config["digits"] = a.digits;

  ConstantTable table;
  table.digits = a.digits;
  table.stability_tol = opt.stability_tol;
  table.richardson_tol = opt.richardson_tol;
  Json diagnostics = Json::object();
  PrecisionScope scope(opt.precision_bits);

  try {
    if (all || a.which == "labeled") {
      const LabeledConstants L = labeled_constants(opt);
      table.add("alpha", L.alpha.alpha);
      table.add("A", L.A, &kRefLabeledA, &L.A_stability);
      table.add("c_l", L.c_l, &kRefLabeledCl, &L.c_l_stability);
      diagnostics["labeled"] = Json{{"xi_prime", L.alpha.xi_prime.convert_to<double>()},
                                    {"residual", L.alpha.residual.convert_to<double>()},
                                    {"bisection_steps", L.alpha.bisection_steps},
                                    {"newton_steps", L.alpha.newton_steps}};
    }
    if (all || a.which == "ub") {
      const UnaryBinaryConstants U = unary_binary_constants(opt);
      table.add("delta", U.delta, &kRefUbDelta, &U.delta_stability);
      table.add("C", U.C, &kRefUbC, &U.C_stability);
      table.add("K1", U.K1);
      table.add("K2", U.K2);
      diagnostics["ub"] = Json{{"t1", point_json(U.t1)}, {"t2", point_json(U.t2)}};
    }
    if (all || a.which == "leaf") {
      const LeafMeanConstant M = leaf_mean_constant(opt);
      table.add("leaf_mu", M.mu, &kRefLeafMu, &M.stability);
      Json& alt = table.add("leaf_mu_partials", M.mu_partials);
      const double gap = bmp::abs(M.mu - M.mu_partials).convert_to<double>();
      alt["formula_gap"] = gap;
      if (gap > 1e-6) table.breach = true;
      table.add("leaf_mu_tree_function", M.baseline, &kRefLeafBaseline);
    }
    if (all || a.which == "logweight") {
      std::vector<ModelSpec> models;
      if (all) {
        ModelFlags b, u;
        b.model = "binary121";
        u.model = "ub";
        models = {resolve_model(b), resolve_model(u)};
      } else {
        models = {resolve_model(a.model, "binary121")};
      }
      for (const auto& ms : models) {
        if (ms.law != ModelSpec::Law::weighted) throw InvalidInput("logweight needs a finite degree model");
        const CltConstants c = logweight_clt_constants(ms.degrees, opt);
        const bool bin = ms.degrees == DegreeModel::binary121();
        const bool ub = ms.degrees == DegreeModel::unary_binary();
        add_clt(table, "logweight[" + ms.degrees.signature() + "].", c,
                bin ? &kRefBinaryMu : ub ? &kRefUbMu : nullptr, bin ? &kRefBinarySigma2 : ub ? &kRefUbSigma2 : nullptr);
      }
    }
    if (all || a.which == "aut") {
      const AutCltConstants c = aut_clt_constants(opt);
      add_clt(table, "aut.", c.aut, &kRefAutMu, &kRefAutSigma2);
      table.add("labelings_mu", c.labelings_mu);
    }
    if (a.which == "degree") {
      std::vector<unsigned> ds;
      try {
        for (const auto& d : split(a.degrees, ',')) ds.push_back(static_cast<unsigned>(std::stoul(d)));
      } catch (const std::exception&) {
        throw InvalidInput("--degrees expects a comma separated list");
      }
      if (ds.empty()) throw InvalidInput("--degrees is empty");
      DegreeLaw law;
      if (a.law == "pairs") law = DegreeLaw::isomorphic_pairs;
      else if (a.law == "gw") law = DegreeLaw::galton_watson;
      else if (a.law == "labeled") law = DegreeLaw::tree_function;
      else throw InvalidInput("--law is pairs, gw or labeled");
      const ModelSpec ms = resolve_model(a.model, "ub");
      if (law == DegreeLaw::galton_watson && ms.law != ModelSpec::Law::weighted) {
        throw InvalidInput("--law gw needs a finite degree model");
      }
      const DegreeCltConstants c = degree_clt_constants(ds, law, ms.degrees, opt);
      config["degrees"] = ds;
      config["law"] = law_name(law);
      if (law == DegreeLaw::galton_watson) config["model"] = ms.to_json();
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string d = std::to_string(ds[i]);
        const Stability* ms_stab = c.mean_stability.empty() ? nullptr : &c.mean_stability[i];
        const Stability* vs_stab = c.variance_stability.empty() ? nullptr : &c.variance_stability[i];
        table.add("degree[" + d + "].mu", c.mean[i], nullptr, ms_stab);
        Json& v = table.add("degree[" + d + "].sigma2", c.covariance[i][i], nullptr, vs_stab);
        table.add_derivative(v, c.fd[i][i]);
        if (c.covariance[i][i] < 0) table.breach = true;
      }
      diagnostics["covariance"] = c.covariance;
    }
  } catch (const SingularSolveError& e) {
    Json doc;
    doc["command"] = "asym";
    doc["config"] = config;
    doc["constants"] = table.items;
    doc["error"] = e.what();
    emit(a.out, dump(doc));
    return kToleranceBreach;
  }

  Json doc;
  doc["command"] = "asym";
  doc["config"] = config;
  doc["constants"] = table.items;
  doc["diagnostics"] = diagnostics;
  doc["within_tolerance"] = !table.breach;
  emit(a.out, dump(doc));
  return table.breach ? kToleranceBreach : kOk;
}

}  // namespace isotree::cli
