#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"

namespace isotree::cli {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

Json ModelSpec::to_json() const {
  Json j;
  j["name"] = name;
  j["law"] = law == Law::labeled ? "labeled" : law == Law::plane ? "plane" : "weighted";
  j["degrees"] = degrees.signature();
  return j;
}

ModelSpec resolve_model(const ModelFlags& f, const std::string& default_model) {
  ModelSpec s;
  if (!f.D.empty()) {
    if (!f.model.empty()) throw InvalidInput("use either --model or --D/--w, not both");
    std::vector<unsigned> D;
    std::vector<Rational> w;
    try {
      for (const auto& d : split(f.D, ',')) D.push_back(static_cast<unsigned>(std::stoul(d)));
      for (const auto& x : split(f.w, ',')) w.push_back(parse_rational(x));
    } catch (const std::exception& e) {
      throw InvalidInput(std::string("cannot parse the degree model: ") + e.what());
    }
    if (w.empty()) w.assign(D.size(), Rational(1));
    if (w.size() != D.size()) throw InvalidInput("--w needs one weight per degree in --D");
    try {
      s.degrees = DegreeModel::finite(D, w);
    } catch (const std::invalid_argument& e) {
      throw InvalidInput(e.what());
    }
    s.law = ModelSpec::Law::weighted;
    s.name = "custom";
    return s;
  }
  const std::string m = f.model.empty() ? default_model : f.model;
  s.name = m;
  if (m == "labeled") {
    s.law = ModelSpec::Law::labeled;
  } else if (m == "plane") {
    s.law = ModelSpec::Law::plane;
  } else if (m == "ub" || m == "unary-binary") {
    s.law = ModelSpec::Law::weighted;
    s.degrees = DegreeModel::unary_binary();
  } else if (m == "binary121") {
    s.law = ModelSpec::Law::weighted;
    s.degrees = DegreeModel::binary121();
  } else if (m == "full-binary") {
    s.law = ModelSpec::Law::weighted;
    s.degrees = DegreeModel::full_binary();
  } else {
    throw InvalidInput("unknown model '" + m + "' (labeled, plane, ub, binary121, full-binary, or --D/--w)");
  }
  return s;
}

std::vector<unsigned> resolve_range(const RangeFlags& r) {
  if (r.n) {
    if (r.n_min || r.n_max) throw InvalidInput("use either --n or --n-min/--n-max");
    if (*r.n == 0) throw InvalidInput("n must be positive");
    return {*r.n};
  }
  if (!r.n_min || !r.n_max) throw InvalidInput("give --n or both --n-min and --n-max");
  if (*r.n_min == 0 || *r.n_min > *r.n_max) throw InvalidInput("need 1 <= n-min <= n-max");
  std::vector<unsigned> v;
  for (unsigned n = *r.n_min; n <= *r.n_max; ++n) v.push_back(n);
  return v;
}

unsigned default_precision_bits() {
  if (const char* env = std::getenv("ISOTREE_PRECISION_BITS")) {
    try {
      const unsigned long v = std::stoul(env);
      if (v >= 32 && v <= 100000) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidInput("ISOTREE_PRECISION_BITS must be an integer in [32, 100000]");
  }
  return kDefaultPrecisionBits;
}

void emit(const OutputFlags& out, const std::string& text) {
  if (out.output.empty() || out.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out.output, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file " + out.output);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}

}  // namespace isotree::cli
