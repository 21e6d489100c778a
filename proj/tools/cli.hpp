#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "isotree/trees.hpp"

namespace isotree::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kToleranceBreach = 2,
  kResourceCeiling = 3,
  kInvalidInput = 4,
};

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --model NAME, or --D with optional --w.
struct ModelSpec {
  enum class Law { labeled, plane, weighted };
  Law law = Law::labeled;
  DegreeModel degrees = DegreeModel::unbounded();
  std::string name;  // as given, or "custom"

  // Degree model of the class law (unbounded for labeled and plane).
  const DegreeModel& model() const { return degrees; }
  Json to_json() const;
};

struct ModelFlags {
  std::string model;
  std::string D;
  std::string w;
};

ModelSpec resolve_model(const ModelFlags& f, const std::string& default_model = "labeled");

struct RangeFlags {
  std::optional<unsigned> n;
  std::optional<unsigned> n_min;
  std::optional<unsigned> n_max;
};

std::vector<unsigned> resolve_range(const RangeFlags& r);

struct OutputFlags {
  std::string format = "json";
  std::string output;  // empty means stdout
};

unsigned default_precision_bits();  // ISOTREE_PRECISION_BITS or the library default

std::vector<std::string> split(const std::string& text, char sep);

// Writes `text` to the chosen destination.
void emit(const OutputFlags& out, const std::string& text);
std::string dump(const Json& j);
std::string csv_escape(const std::string& s);

// One function per subcommand; each returns the process exit code.
struct ExactArgs {
  ModelFlags model;
  RangeFlags range;
  OutputFlags out;
  int digits = 12;
  bool classes = false;
};
int run_exact(const ExactArgs& a);

struct SeriesArgs {
  std::string family = "polya";
  ModelFlags model;
  std::string t = "2";
  unsigned order = 10;
  std::string field = "rational";
  unsigned precision_bits = 0;
  unsigned oracle_max = 15;
  int digits = 20;
  OutputFlags out;
};
int run_series(const SeriesArgs& a);

struct McArgs {
  ModelFlags model;
  RangeFlags range;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  unsigned workers = 1;
  std::string interval = "wilson";
  bool strict = false;
  unsigned exact_max = 14;
  OutputFlags out;
};
int run_mc(const McArgs& a);

struct AsymArgs {
  std::string which = "labeled";
  ModelFlags model;
  std::string degrees = "0,1,2";
  std::string law = "pairs";
  unsigned order = 64;
  unsigned precision_bits = 0;
  double fd_step = 1e-3;
  std::string bracket;  // "lo,hi"
  bool no_stability = false;
  int digits = 15;
  OutputFlags out;
};
int run_asym(const AsymArgs& a);

struct PlaneDecayArgs {
  unsigned n_max = 18;
  int digits = 12;
  OutputFlags out{"csv", ""};
};
int run_plane_decay(const PlaneDecayArgs& a);

struct RecordsArgs {
  ModelFlags model;
  unsigned n = 0;
  std::string cache_dir;
  OutputFlags out{"jsonl", ""};
};
int run_records(const RecordsArgs& a);

}  // namespace isotree::cli
