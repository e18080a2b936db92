// Command-line front end over the rrd C library.
//
// Exit codes: 0 success, 1 internal failure, 2 invalid input or flags,
// 3 I/O failure. Data goes to stdout (or --out files), diagnostics to stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrd/rrd.h"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(rrd_status status) {
  switch (status) {
    case RRD_ERR_IO: return kExitIo;
    case RRD_ERR_INTERNAL:
    case RRD_ERR_NO_MEMORY: return kExitInternal;
    default: return kExitUsage;
  }
}

void check(rrd_status status) {
  if (status != RRD_OK) throw Failure{exit_code_for(status), rrd_last_error()};
}

[[noreturn]] void usage_error(std::string message) { throw Failure{kExitUsage, std::move(message)}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Free(p); }
};

using TreePtr = std::unique_ptr<rrd_tree, Deleter<rrd_tree, rrd_tree_free>>;
using DistancePtr =
    std::unique_ptr<rrd_distance_result, Deleter<rrd_distance_result, rrd_distance_result_free>>;
using GraphPtr = std::unique_ptr<rrd_graph, Deleter<rrd_graph, rrd_graph_free>>;
using ExtremalPtr =
    std::unique_ptr<rrd_extremal_report, Deleter<rrd_extremal_report, rrd_extremal_free>>;
using BatchPtr = std::unique_ptr<rrd_batch, Deleter<rrd_batch, rrd_batch_free>>;
using HistogramPtr = std::unique_ptr<rrd_histogram, Deleter<rrd_histogram, rrd_histogram_free>>;

// Calls a snprintf-style getter twice: once to size, once to fill.
template <class Fn>
std::string fetch_text(Fn&& fn) {
  size_t len = 0;
  check(fn(nullptr, 0, &len));
  std::string out(len + 1, '\0');
  check(fn(out.data(), out.size(), &len));
  out.resize(len);
  return out;
}

std::string encoding_of(const rrd_tree* t) {
  return fetch_text([&](char* b, size_t c, size_t* l) { return rrd_tree_encoding(t, b, c, l); });
}

TreePtr parse_tree(const std::string& text) {
  rrd_tree* raw = nullptr;
  size_t pos = 0;
  const auto status = rrd_tree_parse(text.data(), text.size(), &raw, &pos);
  if (status == RRD_ERR_PARSE) {
    usage_error("invalid encoding '" + (text.size() > 40 ? text.substr(0, 40) + "..." : text) +
                "' at position " + std::to_string(pos) + ": " + rrd_last_error());
  }
  check(status);
  return TreePtr(raw);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Positional encodings followed by the nonblank lines of --file.
std::vector<std::string> gather_encodings(const std::vector<std::string>& positional,
                                          const std::string& file) {
  std::vector<std::string> out = positional;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Failure{kExitIo, "cannot open " + file};
    for (std::string line; std::getline(in, line);) {
      line = trim(line);
      if (!line.empty() && line[0] != '#') out.push_back(line);
    }
  }
  return out;
}

std::pair<TreePtr, TreePtr> parse_pair(const std::vector<std::string>& positional,
                                       const std::string& file) {
  const auto texts = gather_encodings(positional, file);
  if (texts.size() != 2) {
    usage_error("expected exactly two encodings, got " + std::to_string(texts.size()));
  }
  return {parse_tree(texts[0]), parse_tree(texts[1])};
}

std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::vector<rrd_size_range> parse_buckets(const std::string& text) {
  size_t count = 0;
  check(rrd_parse_buckets(text.c_str(), nullptr, 0, &count));
  std::vector<rrd_size_range> out(count);
  check(rrd_parse_buckets(text.c_str(), out.data(), out.size(), &count));
  return out;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Failure{kExitIo, "cannot create output directory " + dir};
  }
  return dir;
}

double parse_fraction_list_item(const std::string& item) {
  try {
    size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || !(v >= 0)) throw std::invalid_argument(item);
    return v;
  } catch (const std::exception&) {
    usage_error("invalid threshold '" + item + "'");
  }
}

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    out.push_back(parse_fraction_list_item(trim(item)));
  }
  if (out.empty()) usage_error("empty threshold list");
  return out;
}

void print_fit(const char* label, const rrd_fit& fit) {
  std::cout << label << " slope=" << fixed(fit.slope) << " intercept=" << fixed(fit.intercept)
            << " max_rel_residual=" << fixed(fit.max_relative_residual)
            << " points=" << fit.count << '\n';
}

void print_deviation(const rrd_batch* batch, rrd_aggregate_mode mode, const rrd_fit& fit,
                     const std::vector<double>& thresholds) {
  std::vector<double> fractions(thresholds.size());
  double max_dev = 0;
  check(rrd_batch_deviation(batch, mode, &fit, thresholds.data(), thresholds.size(),
                            fractions.data(), &max_dev));
  std::cout << "deviation";
  for (size_t i = 0; i < thresholds.size(); ++i) {
    std::cout << " beyond_" << fixed(thresholds[i], 4) << '=' << fixed(fractions[i]);
  }
  std::cout << " max=" << fixed(max_dev) << '\n';
}

// ---- option storage --------------------------------------------------------

struct Options {
  std::vector<std::string> encodings;
  std::string file;
  bool show_types = false;
  bool strict = false;

  std::string address;
  std::string direction;
  std::string move;

  size_t size = 0;
  size_t count = 1;
  uint64_t seed = 0;
  bool pairs = false;

  bool verify = false;
  bool extremal = false;
  std::string edges;

  std::string mode;
  std::string buckets = "paper";
  std::string out = ".";
  unsigned threads = 1;
  bool fit = false;

  uint64_t bin_width = 1;
  uint64_t budget = 0;
  bool svg = false;

  std::string thresholds;
};

// ---- subcommands -----------------------------------------------------------

void cmd_dist(const Options& o) {
  auto [s, t] = parse_pair(o.encodings, o.file);
  rrd_distance_result* raw = nullptr;
  check(rrd_distance(s.get(), t.get(), o.strict ? unsigned{RRD_DISTANCE_STRICT} : 0u, &raw));
  const DistancePtr result(raw);
  const size_t reduced = rrd_distance_reduced_size(result.get());
  std::cout << "distance=" << rrd_distance_value(result.get()) << " reduced_size=" << reduced
            << '\n';
  if (o.show_types) {
    for (size_t k = 0; k < reduced; ++k) {
      rrd_caret_type a{}, b{};
      check(rrd_distance_type_pair(result.get(), k, &a, &b));
      std::cout << k << ' ' << rrd_caret_type_name(a) << ' ' << rrd_caret_type_name(b) << '\n';
    }
  }
}

void cmd_reduce(const Options& o) {
  auto [s, t] = parse_pair(o.encodings, o.file);
  rrd_tree *a = nullptr, *b = nullptr;
  check(rrd_reduce_pair(s.get(), t.get(), &a, &b));
  const TreePtr ra(a), rb(b);
  std::cout << encoding_of(ra.get()) << '\n' << encoding_of(rb.get()) << '\n';
}

void cmd_rotate(const Options& o) {
  const auto texts = gather_encodings(o.encodings, o.file);
  if (texts.size() != 1) usage_error("expected exactly one encoding");
  const TreePtr tree = parse_tree(texts[0]);
  rrd_tree* raw = nullptr;
  if (!o.move.empty()) {
    if (!o.address.empty() || !o.direction.empty()) {
      usage_error("--move cannot be combined with --address/--direction");
    }
    rrd_move m{};
    check(rrd_move_from_name(o.move.c_str(), &m));
    check(rrd_apply_move(tree.get(), m, &raw));
  } else {
    if (o.direction.empty()) usage_error("either --move or --direction is required");
    const auto dir = o.direction == "left" ? RRD_LEFT : RRD_RIGHT;
    check(rrd_rotate(tree.get(), o.address.c_str(), dir, &raw));
  }
  const TreePtr result(raw);
  std::cout << encoding_of(result.get()) << '\n';
}

void cmd_sample(const Options& o) {
  for (size_t i = 0; i < o.count; ++i) {
    if (o.pairs) {
      rrd_tree *a = nullptr, *b = nullptr;
      check(rrd_sample_pair(o.size, o.seed, i, &a, &b));
      const TreePtr ta(a), tb(b);
      std::cout << encoding_of(ta.get()) << ' ' << encoding_of(tb.get()) << '\n';
    } else {
      rrd_tree* t = nullptr;
      check(rrd_sample_tree(o.size, o.seed, i, &t));
      const TreePtr tt(t);
      std::cout << encoding_of(tt.get()) << '\n';
    }
  }
}

void cmd_oracle(const Options& o) {
  rrd_graph* raw = nullptr;
  check(rrd_graph_build(o.size, &raw));
  const GraphPtr graph(raw);
  std::cout << "vertices=" << rrd_graph_vertex_count(graph.get())
            << " edges=" << rrd_graph_edge_count(graph.get()) << '\n';
  if (!o.edges.empty()) {
    std::cout.flush();
    check(rrd_graph_write_edges(graph.get(), o.edges.c_str()));
  }
  if (o.verify) {
    rrd_verify_report report{};
    check(rrd_verify_fordham(o.size, &report));
    std::cout << "pairs=" << report.pairs_checked << " mismatches=" << report.mismatches << '\n';
  }
  if (o.extremal) {
    rrd_extremal_report* ext_raw = nullptr;
    check(rrd_extremal(o.size, &ext_raw));
    const ExtremalPtr ext(ext_raw);
    const auto witness = [&](int which, int side) {
      return fetch_text([&](char* b, size_t c, size_t* l) {
        return rrd_extremal_witness(ext.get(), which, side, b, c, l);
      });
    };
    std::cout << "min=" << rrd_extremal_min(ext.get()) << " max=" << rrd_extremal_max(ext.get())
              << '\n';
    std::cout << "reduced_pairs=" << rrd_extremal_reduced_pairs(ext.get()) << '\n';
    if (rrd_extremal_reduced_pairs(ext.get()) > 0) {
      std::cout << "min_witness=" << witness(0, 0) << ' ' << witness(0, 1) << '\n';
      std::cout << "max_witness=" << witness(1, 0) << ' ' << witness(1, 1) << '\n';
    }
  }
}

void cmd_experiment(const Options& o) {
  if (o.mode != "table2" && o.mode != "table3") {
    usage_error("experiment mode must be table2 or table3");
  }
  const auto mode = o.mode == "table2" ? RRD_BY_RAW_SIZE : RRD_BY_REDUCED_SIZE;
  const auto ranges = parse_buckets(o.buckets);
  const auto dir = prepare_out_dir(o.out);

  const rrd_batch_config config{ranges.data(), ranges.size(), o.count, o.seed, o.threads};
  rrd_batch* raw = nullptr;
  check(rrd_batch_run(&config, &raw));
  const BatchPtr batch(raw);

  std::vector<rrd_bucket_row> rows(ranges.size());
  check(rrd_aggregate(batch.get(), ranges.data(), ranges.size(), mode, rows.data()));

  const auto pairs_path = (dir / "pairs.csv").string();
  const auto buckets_path = (dir / "buckets.csv").string();
  check(rrd_batch_write_csv(batch.get(), pairs_path.c_str()));
  check(rrd_write_bucket_csv(rows.data(), rows.size(), buckets_path.c_str()));

  std::cout << "mode=" << o.mode << " pairs=" << rrd_batch_size(batch.get())
            << " seed=" << o.seed << '\n';
  for (const auto& row : rows) {
    std::cout << row.range.lo << '-' << row.range.hi << " count=" << row.count;
    if (row.count > 0) {
      if (mode == RRD_BY_RAW_SIZE) {
        std::cout << " avg_reduced_fraction=" << fixed(row.avg_reduced_fraction);
      }
      std::cout << " avg_ratio=" << fixed(row.avg_ratio) << " sd_ratio=" << fixed(row.sd_ratio);
    }
    std::cout << '\n';
  }
  if (o.fit) {
    rrd_fit fit{};
    check(rrd_batch_fit(batch.get(), mode, &fit));
    print_fit("fit", fit);
  }
  std::cout << "wrote " << pairs_path << ' ' << buckets_path << '\n';
}

void cmd_hist(const Options& o) {
  if (o.size == 0) usage_error("--size must be at least 1");
  rrd_histogram* raw = nullptr;
  if (!o.file.empty()) {
    rrd_batch* batch_raw = nullptr;
    check(rrd_batch_read_csv(o.file.c_str(), &batch_raw));
    const BatchPtr batch(batch_raw);
    check(rrd_histogram_from_batch(batch.get(), o.size, o.bin_width, &raw));
  } else {
    const rrd_histogram_config config{o.size, o.count, o.seed, o.budget, o.bin_width, o.threads};
    check(rrd_histogram_sample(&config, &raw));
  }
  const HistogramPtr hist(raw);
  rrd_histogram_summary summary{};
  check(rrd_histogram_get_summary(hist.get(), &summary));

  const auto dir = prepare_out_dir(o.out);
  const auto stem = "hist_" + std::to_string(o.size);
  const auto csv_path = (dir / (stem + ".csv")).string();
  check(rrd_histogram_write_csv(hist.get(), csv_path.c_str()));
  std::string svg_path;
  if (o.svg) {
    svg_path = (dir / (stem + ".svg")).string();
    check(rrd_histogram_write_svg(hist.get(), svg_path.c_str()));
  }

  std::cout << "n=" << summary.target_reduced_size << " count=" << summary.sample_count
            << " mean=" << fixed(summary.mean, 4) << " sd=" << fixed(summary.sd, 4)
            << " skewness=" << fixed(summary.skewness, 4) << " bins=" << summary.bin_count;
  if (summary.generated > 0) std::cout << " generated=" << summary.generated;
  std::cout << '\n' << "wrote " << csv_path;
  if (!svg_path.empty()) std::cout << ' ' << svg_path;
  std::cout << '\n';
}

void cmd_fit(const Options& o) {
  if (o.mode != "raw" && o.mode != "reduced") usage_error("fit mode must be raw or reduced");
  if (o.file.empty()) usage_error("a per-pair CSV file is required");
  const auto mode = o.mode == "raw" ? RRD_BY_RAW_SIZE : RRD_BY_REDUCED_SIZE;
  rrd_batch* raw = nullptr;
  check(rrd_batch_read_csv(o.file.c_str(), &raw));
  const BatchPtr batch(raw);
  rrd_fit fit{};
  check(rrd_batch_fit(batch.get(), mode, &fit));
  print_fit("fit", fit);
  if (!o.thresholds.empty()) print_deviation(batch.get(), mode, fit, parse_thresholds(o.thresholds));
}

int run(int argc, char** argv) {
  CLI::App app{"Restricted rotation distance between binary trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rrd_version()));
  Options o;

  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master seed; the only source of randomness")
        ->capture_default_str();
  };
  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
  };

  auto* dist = app.add_subcommand("dist", "Restricted rotation distance of a tree pair");
  dist->add_option("encodings", o.encodings, "Two preorder encodings");
  dist->add_option("--file", o.file, "Read encodings from a file, one per line");
  dist->add_flag("--show-types", o.show_types, "Print the caret type of every node pair");
  dist->add_flag("--strict", o.strict, "Reject pairs that are not reduced");
  dist->callback([&] { cmd_dist(o); });

  auto* reduce = app.add_subcommand("reduce", "Reduce a tree pair");
  reduce->add_option("encodings", o.encodings, "Two preorder encodings");
  reduce->add_option("--file", o.file, "Read encodings from a file, one per line");
  reduce->callback([&] { cmd_reduce(o); });

  auto* rotate = app.add_subcommand("rotate", "Rotate a tree at a node or apply a named move");
  rotate->add_option("encoding", o.encodings, "Preorder encoding");
  rotate->add_option("--file", o.file, "Read the encoding from a file");
  rotate->add_option("--address", o.address, "Node address: 0 = left, 1 = right, empty = root");
  rotate->add_option("--direction", o.direction, "left or right")
      ->check(CLI::IsMember({"left", "right"}));
  rotate->add_option("--move", o.move, "Restricted move: x0, x0i, x1 or x1i");
  rotate->callback([&] { cmd_rotate(o); });

  auto* sample = app.add_subcommand("sample", "Uniform random trees");
  sample->add_option("--size", o.size, "Internal nodes per tree")->required();
  sample->add_option("--count,--counts", o.count, "Number of trees")->capture_default_str();
  sample->add_flag("--pairs", o.pairs, "Emit tree pairs \"S T\" instead of single trees");
  add_seed(sample);
  sample->callback([&] { cmd_sample(o); });

  auto* oracle = app.add_subcommand("oracle", "Brute-force restricted rotation graph");
  oracle->add_option("--size", o.size, "Tree size")->required();
  oracle->add_flag("--verify", o.verify, "Compare the weight formula with BFS on all pairs");
  oracle->add_flag("--extremal", o.extremal, "Min/max distance over reduced pairs");
  oracle->add_option("--edges", o.edges, "Write the edge list to a file (- for stdout)");
  oracle->callback([&] { cmd_oracle(o); });

  auto* experiment = app.add_subcommand("experiment", "Distance tables over random pairs");
  experiment->add_option("mode", o.mode, "table2 (by raw size) or table3 (by reduced size)")
      ->required();
  experiment->add_option("--buckets", o.buckets, "lo:hi,... or paper")->capture_default_str();
  experiment->add_option("--count,--counts", o.count, "Pairs per bucket")->required();
  experiment->add_option("--out", o.out, "Output directory")->capture_default_str();
  experiment->add_flag("--fit", o.fit, "Print a least-squares fit of distance on size");
  add_seed(experiment);
  add_threads(experiment);
  experiment->callback([&] { cmd_experiment(o); });

  auto* hist = app.add_subcommand("hist", "Distance histogram for one reduced size");
  hist->add_option("--size", o.size, "Reduced pair size")->required();
  hist->add_option("--count,--counts", o.count, "Pairs to keep")->capture_default_str();
  hist->add_option("--file", o.file, "Build from an existing per-pair CSV instead of sampling");
  hist->add_option("--bin-width", o.bin_width, "Bin width in distance units")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  hist->add_option("--budget", o.budget, "Maximum pairs to generate (0 = default)");
  hist->add_option("--out", o.out, "Output directory")->capture_default_str();
  hist->add_flag("--svg", o.svg, "Also write an SVG rendering");
  add_seed(hist);
  add_threads(hist);
  hist->callback([&] { cmd_hist(o); });

  auto* fit = app.add_subcommand("fit", "Least-squares fit over a per-pair CSV");
  fit->add_option("mode", o.mode, "raw or reduced")->required();
  fit->add_option("csv", o.file, "Per-pair CSV")->required();
  fit->add_option("--deviation", o.thresholds,
                  "Comma-separated relative thresholds, e.g. 0.01,0.03,0.06");
  fit->callback([&] { cmd_fit(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const int code = run(argc, argv);
    std::cout.flush();
    if (!std::cout) {
      std::cerr << "rrd: write to standard output failed\n";
      return kExitIo;
    }
    return code;
  } catch (const Failure& f) {
    std::cout.flush();
    std::cerr << "rrd: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "rrd: " << e.what() << '\n';
    return kExitInternal;
  }
}
