#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cli.hpp"

#include "isotree/asymptotics.hpp"
#include "isotree/cache.hpp"
#include "isotree/enumeration.hpp"
#include "isotree/scalar.hpp"

namespace isotree::cli {

namespace {

std::string rational_text(const Rational& q) { return q.str(); }

Json base_config(const std::string& command, const OutputFlags& out) {
  Json c;
  c["command"] = command;
  c["format"] = out.format;
  c["output"] = out.output.empty() ? "-" : out.output;
  return c;
}

void check_format(const OutputFlags& out, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (out.format == f) return;
  }
  throw InvalidInput("unsupported --format " + out.format);
}

std::string csv_config_comment(const Json& config) { return "# config " + config.dump() + "\n"; }

Rational power(const Rational& base, long t) {
  Rational r = 1;
  const Rational b = t < 0 ? Rational(1 / base) : base;
  for (long k = 0; k < std::labs(t); ++k) r *= b;
  return r;
}

// sum over classes of size n of aut^-t (unbounded) or W^t (finite D).
Rational class_power_sum(PolyaEnumerator& e, unsigned n, long t) {
  const DegreeModel& m = e.model();
  Rational sum = 0;
  e.for_each(n, [&](const ClassView& c) {
    if (m.is_unbounded()) {
      sum += power(Rational(to_bigint(c.aut)), -t);
      return;
    }
    Rational w = Rational(to_bigint(c.plane_representations()));
    auto counts = c.degree_counts();
    for (std::size_t i = 0; i < m.degrees().size(); ++i) {
      const unsigned d = m.degrees()[i];
      const unsigned k = d < counts.size() ? counts[d] : 0;
      for (unsigned r = 0; r < k; ++r) w *= m.weights()[i];
    }
    sum += power(w, t);
  });
  return sum;
}

}  // namespace

// ------------------------------------------------------------------ exact

int run_exact(const ExactArgs& a) {
  check_format(a.out, {"json", "csv"});
  const ModelSpec spec = resolve_model(a.model);
  const std::vector<unsigned> ns = resolve_range(a.range);
  if (a.digits < 0 || a.digits > 200) throw InvalidInput("--digits must be in [0, 200]");

  Json config = base_config("exact", a.out);
  config["model"] = spec.to_json();
  config["n"] = ns;
  config["digits"] = a.digits;
  config["classes"] = a.classes;

  PolyaEnumerator e(spec.model());
  const char* quantity = spec.law == ModelSpec::Law::labeled ? "p_n" : spec.law == ModelSpec::Law::plane ? "q_n" : "g_n";
  Json results = Json::array();
  std::ostringstream csv;
  csv << csv_config_comment(config) << "n,quantity,value,decimal\n";
  for (unsigned n : ns) {
    Json row;
    row["n"] = n;
    row["quantity"] = quantity;
    Rational v;
    bool reachable = true;
    if (spec.law == ModelSpec::Law::labeled) {
      v = exact_p_labeled(e, n);
    } else {
      try {
        v = exact_p_gw(e, n);
      } catch (const std::invalid_argument&) {
        reachable = false;
      }
    }
    if (!reachable) {
      row["value"] = nullptr;
      row["unreachable"] = true;
      csv << n << "," << quantity << ",,\n";
    } else {
      row["value"] = rational_text(v);
      row["decimal"] = to_decimal(v, a.digits);
      csv << n << "," << quantity << "," << rational_text(v) << "," << to_decimal(v, a.digits) << "\n";
    }
    if (a.classes) {
      Json cls = Json::array();
      enumerate_polya(n, spec.model(), [&](const PolyaRecord& r) {
        Json c;
        c["code_hex"] = r.code.hex();
        c["aut"] = r.aut.str();
        c["pr"] = r.pr.str();
        c["weight"] = r.weight.str();
        cls.push_back(c);
      });
      row["classes"] = cls;
    }
    results.push_back(row);
  }
  if (a.out.format == "csv") {
    emit(a.out, csv.str());
  } else {
    Json doc;
    doc["command"] = "exact";
    doc["config"] = config;
    doc["results"] = results;
    emit(a.out, dump(doc));
  }
  return kOk;
}

// ------------------------------------------------------------------ series

int run_series(const SeriesArgs& a) {
  check_format(a.out, {"json", "csv"});
  if (a.order == 0) throw InvalidInput("--order must be at least 1");
  if (a.field != "rational" && a.field != "real") throw InvalidInput("--field is rational or real");
  ModelSpec spec;
  bool polya = false;
  if (a.family == "polya") {
    polya = true;
    spec.law = ModelSpec::Law::labeled;
    spec.name = "polya";
  } else if (a.family == "degree") {
    spec = resolve_model(a.model, "ub");
    if (spec.law != ModelSpec::Law::weighted) throw InvalidInput("--family degree needs a finite degree model");
  } else {
    ModelFlags f;
    f.model = a.family;
    spec = resolve_model(f);
    if (spec.law != ModelSpec::Law::weighted) throw InvalidInput("unknown series family " + a.family);
  }
  Rational t_exact;
  try {
    t_exact = parse_rational(a.t);
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse --t " + a.t);
  }
  const bool integer_t = denominator(t_exact) == 1;
  if (a.field == "rational" && !integer_t) throw InvalidInput("exact series need an integer t; use --field real");
  const unsigned bits = a.precision_bits ? a.precision_bits : default_precision_bits();

  Json config = base_config("series", a.out);
  config["family"] = a.family;
  if (!polya) config["model"] = spec.to_json();
  config["t"] = a.t;
  config["order"] = a.order;
  config["field"] = a.field;
  if (a.field == "real") {
    config["precision_bits"] = bits;
    config["digits"] = a.digits;
  }
  config["oracle_max"] = a.oracle_max;

  std::vector<std::string> values(a.order + 1);
  std::vector<Rational> exact_values;
  std::vector<Real> real_values;
  PrecisionScope scope(bits);
  if (a.field == "rational") {
    const auto s = polya ? solve_polya_series(t_exact, a.order) : solve_degree_series(spec.model(), t_exact, a.order);
    for (unsigned k = 0; k <= a.order; ++k) {
      exact_values.push_back(s[k]);
      values[k] = s[k].str();
    }
  } else {
    const Real t = to_real(t_exact);
    const auto s = polya ? solve_polya_series(t, a.order) : solve_degree_series(spec.model(), t, a.order);
    for (unsigned k = 0; k <= a.order; ++k) {
      real_values.push_back(s[k]);
      values[k] = to_decimal(s[k], a.digits);
    }
  }

  // Oracle: class sums from the enumeration, for integer t.
  Json oracle;
  bool agrees = true;
  if (integer_t && a.oracle_max > 0) {
    PolyaEnumerator e(polya ? DegreeModel::unbounded() : spec.model());
    const unsigned top = std::min({a.order, a.oracle_max, e.ceiling()});
    Json mism = Json::array();
    for (unsigned n = 1; n <= top; ++n) {
      const Rational ref = class_power_sum(e, n, numerator(t_exact).convert_to<long>());
      bool ok;
      if (a.field == "rational") {
        ok = exact_values[n] == ref;
      } else {
        const Real r = to_real(ref);
        ok = bmp::abs(real_values[n] - r) <= bmp::ldexp(Real(1), -static_cast<int>(bits) + 24) * (1 + bmp::abs(r));
      }
      if (!ok) mism.push_back(n);
    }
    agrees = mism.empty();
    oracle["max_n"] = top;
    oracle["agrees"] = agrees;
    oracle["mismatches"] = mism;
  } else {
    oracle["max_n"] = 0;
    oracle["agrees"] = nullptr;
  }

  if (a.out.format == "csv") {
    std::ostringstream csv;
    csv << csv_config_comment(config) << "n,coefficient\n";
    for (unsigned k = 1; k <= a.order; ++k) csv << k << "," << values[k] << "\n";
    emit(a.out, csv.str());
  } else {
    Json doc;
    doc["command"] = "series";
    doc["config"] = config;
    Json coeffs = Json::array();
    for (unsigned k = 1; k <= a.order; ++k) coeffs.push_back(Json{{"n", k}, {"coefficient", values[k]}});
    doc["coefficients"] = coeffs;
    doc["oracle"] = oracle;
    emit(a.out, dump(doc));
  }
  return agrees ? kOk : kToleranceBreach;
}

// ------------------------------------------------------------------ plane decay

int run_plane_decay(const PlaneDecayArgs& a) {
  check_format(a.out, {"json", "csv"});
  if (a.n_max == 0) throw InvalidInput("--n-max must be positive");
  Json config = base_config("plane-decay", a.out);
  config["n_max"] = a.n_max;
  config["digits"] = a.digits;
  PrecisionScope scope(default_precision_bits());
  const auto rows = plane_decay_table(a.n_max);
  if (a.out.format == "csv") {
    std::ostringstream csv;
    csv << csv_config_comment(config) << "n,plane_trees,q,q_decimal,rate\n";
    for (const auto& r : rows) {
      csv << r.n << "," << r.plane_trees.str() << "," << r.q.str() << "," << to_decimal(r.q, a.digits) << ","
          << to_decimal(r.rate, a.digits) << "\n";
    }
    emit(a.out, csv.str());
  } else {
    Json doc;
    doc["command"] = "plane-decay";
    doc["config"] = config;
    Json out = Json::array();
    for (const auto& r : rows) {
      out.push_back(Json{{"n", r.n},
                         {"plane_trees", r.plane_trees.str()},
                         {"q", r.q.str()},
                         {"q_decimal", to_decimal(r.q, a.digits)},
                         {"rate", to_decimal(r.rate, a.digits)}});
    }
    doc["rows"] = out;
    emit(a.out, dump(doc));
  }
  return kOk;
}

// ------------------------------------------------------------------ records

int run_records(const RecordsArgs& a) {
  check_format(a.out, {"jsonl", "csv"});
  if (a.n == 0) throw InvalidInput("--n must be positive");
  const ModelSpec spec = resolve_model(a.model);
  const DegreeModel& m = spec.model();

  Json config = base_config("records", a.out);
  config["model"] = spec.to_json();
  config["n"] = a.n;
  config["cache_dir"] = a.cache_dir;

  std::vector<PolyaRecord> records;
  std::string cache_state = "disabled";
  if (!a.cache_dir.empty()) {
    std::ostringstream name;
    name << "records-" << std::hex << std::setw(16) << std::setfill('0') << m.weight_hash() << std::dec << "-n" << a.n
         << ".ptrc";
    const std::filesystem::path path = std::filesystem::path(a.cache_dir) / name.str();
    cache_state = "miss";
    if (std::ifstream in(path, std::ios::binary); in) {
      try {
        RecordCache c = read_record_cache(in);
        if (cache_matches(c, a.n, m)) {
          records = std::move(c.records);
          cache_state = "hit";
        } else {
          cache_state = "stale";
        }
      } catch (const CacheFormatError&) {
        cache_state = "corrupt";
      }
    }
    if (cache_state != "hit") {
      records = enumerate_polya(a.n, m);
      std::filesystem::create_directories(a.cache_dir);
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InvalidInput("cannot write cache file " + path.string());
      write_record_cache(out, a.n, m, records);
    }
  } else {
    records = enumerate_polya(a.n, m);
  }
  config["cache"] = cache_state;

  std::ostringstream os;
  if (a.out.format == "csv") {
    os << csv_config_comment(config) << "code_hex,n,aut,pr,weight_num,weight_den\n";
    for (const auto& r : records) {
      os << r.code.hex() << "," << r.n << "," << r.aut.str() << "," << r.pr.str() << ","
         << numerator(r.weight).str() << "," << denominator(r.weight).str() << "\n";
    }
  } else {
    os << Json{{"config", config}}.dump() << "\n";
    for (const auto& r : records) {
      Json j;
      j["code_hex"] = r.code.hex();
      j["n"] = r.n;
      j["aut"] = r.aut.str();
      j["pr"] = r.pr.str();
      j["weight_num"] = numerator(r.weight).str();
      j["weight_den"] = denominator(r.weight).str();
      os << j.dump() << "\n";
    }
  }
  emit(a.out, os.str());
  return kOk;
}

}  // namespace isotree::cli
