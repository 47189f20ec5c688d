// tsketch — command-line harness for the layered-sketch library.
//
// Subcommands:
//   generate  write a reproducible Zipfian item stream to a file
//   bench     score sketch variants against an exact oracle, emit CSV
//   analyze   print the analytic space/capacity/error quantities
//   build     ingest a stream and serialize the resulting sketch
//   query     load a sketch file and estimate item frequencies
//
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tsketch/tsketch.hpp"

namespace {

// Thrown for problems in how the tool was invoked (bad flag combinations,
// infeasible geometry requests); everything else is a runtime failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

uint32_t log2_exact(uint64_t value, const char* what) {
  if (value == 0 || !std::has_single_bit(value)) {
    throw UsageError(std::string(what) + " must be a power of two");
  }
  return static_cast<uint32_t>(std::countr_zero(value));
}

// A replayable item stream: either a newline-delimited file or a seeded
// Zipf specification. Re-running it always yields the same items.
struct StreamSource {
  std::optional<std::filesystem::path> path;
  std::optional<tsketch::ZipfSpec> zipf;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    if (path) {
      tsketch::FileStream stream(*path);
      std::string item;
      while (stream.next(item)) fn(item);
    } else {
      tsketch::ZipfGenerator gen(*zipf);
      for (uint64_t i = 0; i < zipf->total; ++i) fn(gen.next_item());
    }
  }
};

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  double skew = 1.0;
  uint64_t distinct = 0;
  uint64_t total = 0;
  uint64_t seed = 0;
  std::string out;
};

void run_generate(const GenerateArgs& a) {
  tsketch::ZipfSpec spec{a.skew, a.distinct, a.total, a.seed};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + a.out + " for writing");
  tsketch::ZipfGenerator gen(spec);
  std::vector<uint8_t> seen(spec.distinct, 0);
  uint64_t distinct_seen = 0;
  for (uint64_t i = 0; i < spec.total; ++i) {
    uint64_t rank = gen.next_rank();
    if (!seen[rank]) {
      seen[rank] = 1;
      ++distinct_seen;
    }
    out << rank << '\n';
  }
  if (!out.flush()) throw std::runtime_error("failed writing " + a.out);
  std::cout << "N=" << spec.total << " n=" << distinct_seen << '\n';
}

// ------------------------------------------------------------------- bench

enum class VariantChoice { CM, CU, SP, CA };

const char* variant_token(VariantChoice v) {
  switch (v) {
    case VariantChoice::CM: return "cm";
    case VariantChoice::CU: return "cu";
    case VariantChoice::SP: return "sp";
    case VariantChoice::CA: return "ca";
  }
  return "?";
}

std::vector<VariantChoice> parse_variants(const std::string& csv) {
  std::vector<VariantChoice> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token == "cm") out.push_back(VariantChoice::CM);
    else if (token == "cu") out.push_back(VariantChoice::CU);
    else if (token == "sp") out.push_back(VariantChoice::SP);
    else if (token == "ca") out.push_back(VariantChoice::CA);
    else if (token.empty()) continue;
    else throw UsageError("unknown variant '" + token + "' (expected cm, cu, sp, ca)");
  }
  if (out.empty()) throw UsageError("at least one variant is required");
  return out;
}

tsketch::SketchGeometry geometry_for(VariantChoice v, uint64_t top_size,
                                     uint32_t layers, uint64_t ratio, uint64_t w) {
  try {
    switch (v) {
      case VariantChoice::CM:
      case VariantChoice::CU:
        return tsketch::SketchGeometry::r_structure(
            w, layers, log2_exact(top_size, "--B"));
      case VariantChoice::SP:
        return tsketch::SketchGeometry::trapezoidal(
            tsketch::Variant::SpaceSaving, w, top_size, layers, ratio);
      case VariantChoice::CA:
        return tsketch::capacity_improvement_geometry(top_size, w).geometry;
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " (variant " + variant_token(v) + ")");
  }
  throw UsageError("unknown variant");
}

struct BenchArgs {
  std::string input;
  double skew = 1.0;
  uint64_t distinct = 0;
  uint64_t total = 0;
  uint64_t top_size = 65536;
  uint32_t layers = 4;
  uint64_t ratio = 2;
  uint64_t w = 0;
  uint64_t memory_bits = 0;
  uint64_t seed = 0;
  bool correct = false;
  std::string variants = "cm,cu,sp,ca";
  std::string out;
};

// One scored CSV row.
struct BenchRow {
  std::string variant;
  uint64_t w = 0;
  uint32_t layers = 0;
  uint16_t ratio = 1;
  uint64_t top_size = 0;
  tsketch::AccuracyReport raw;
  std::optional<tsketch::AccuracyReport> corrected;
  tsketch::ResourceReport resources;
  uint64_t seed = 0;
};

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "variant,w,k,d,B,aae,are,aae_corrected,are_corrected,"
         "space_bits,occupation_ratio,capacity,seed,are_skipped\n";
  for (const BenchRow& r : rows) {
    out << r.variant << ',' << r.w << ',' << r.layers << ',' << r.ratio << ','
        << r.top_size << ',' << fmt(r.raw.aae) << ',' << fmt(r.raw.are) << ',';
    if (r.corrected) {
      out << fmt(r.corrected->aae) << ',' << fmt(r.corrected->are);
    } else {
      out << ',';
    }
    out << ',' << r.resources.space_bits << ','
        << fmt(r.resources.occupation_ratio) << ',' << r.resources.capacity
        << ',' << r.seed << ',' << r.raw.are_skipped << '\n';
  }
}

template <typename Sketch, typename RawFn, typename CorrectedFn>
BenchRow score_sketch(Sketch& sketch, VariantChoice choice, uint64_t top_size,
                      const StreamSource& source, const tsketch::ExactOracle& oracle,
                      uint64_t seed, bool correct, RawFn raw_of, CorrectedFn corrected_of) {
  source.for_each([&](const std::string& item) { sketch.insert(item); });

  std::vector<double> raw_estimates;
  std::vector<uint64_t> truths;
  raw_estimates.reserve(oracle.distinct());
  truths.reserve(oracle.distinct());
  std::vector<double> corrected_estimates;
  if (correct) corrected_estimates.reserve(oracle.distinct());

  for (std::string_view item : oracle.items()) {
    raw_estimates.push_back(raw_of(sketch, item));
    truths.push_back(oracle.count(item));
    if (correct) corrected_estimates.push_back(corrected_of(sketch, item));
  }

  BenchRow row;
  row.variant = variant_token(choice);
  row.w = sketch.geometry().counters_per_layer;
  row.layers = sketch.geometry().layers();
  row.ratio = sketch.geometry().width_ratio;
  row.top_size = top_size;
  row.raw = tsketch::compute_accuracy(raw_estimates, truths);
  if (correct) row.corrected = tsketch::compute_accuracy(corrected_estimates, truths);
  row.resources = tsketch::compute_resources(sketch);
  row.seed = seed;
  return row;
}

void run_bench(const BenchArgs& a) {
  std::vector<VariantChoice> variants = parse_variants(a.variants);

  const bool have_file = !a.input.empty();
  const bool have_zipf = a.total != 0 || a.distinct != 0;
  if (have_file == have_zipf) {
    throw UsageError("provide exactly one stream source: --input, or --distinct/--total");
  }
  StreamSource source;
  if (have_file) {
    source.path = a.input;
  } else {
    tsketch::ZipfSpec spec{a.skew, a.distinct, a.total, a.seed};
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    source.zipf = spec;
  }

  if ((a.w == 0) == (a.memory_bits == 0)) {
    throw UsageError("provide exactly one of --w and --memory-bits");
  }

  // Resolve each variant's geometry up front so flag problems surface as
  // usage errors before any stream work. Under a memory budget every
  // variant derives its own row length: w = floor(budget / bits-per-row).
  std::vector<std::pair<VariantChoice, tsketch::SketchGeometry>> geometries;
  for (VariantChoice v : variants) {
    uint64_t w = a.w;
    if (a.memory_bits != 0) {
      uint64_t row_bits = geometry_for(v, a.top_size, a.layers, a.ratio, 1).slice_bits();
      w = a.memory_bits / row_bits;
      if (w == 0) {
        throw UsageError("--memory-bits " + std::to_string(a.memory_bits) +
                         " cannot fund even one counter per layer (row needs " +
                         std::to_string(row_bits) + " bits) for variant " +
                         variant_token(v));
      }
    }
    geometries.emplace_back(v, geometry_for(v, a.top_size, a.layers, a.ratio, w));
  }

  tsketch::ExactOracle oracle;
  source.for_each([&](const std::string& item) { oracle.add(item); });
  if (oracle.distinct() == 0) {
    throw std::runtime_error("the input stream is empty; nothing to score");
  }
  const uint64_t n = oracle.distinct();
  const uint64_t total = oracle.total();

  std::vector<BenchRow> rows;
  for (const auto& [choice, geometry] : geometries) {
    if (choice == VariantChoice::CM || choice == VariantChoice::CU) {
      tsketch::UpdateRule rule = choice == VariantChoice::CM
                                     ? tsketch::UpdateRule::CountMin
                                     : tsketch::UpdateRule::ConservativeUpdate;
      tsketch::RSketch sketch(geometry, a.seed, rule);
      const uint64_t w = geometry.counters_per_layer;
      const uint32_t layers = geometry.layers();
      rows.push_back(score_sketch(
          sketch, choice, a.top_size, source, oracle, a.seed, a.correct,
          [](const tsketch::RSketch& s, std::string_view item) {
            return static_cast<double>(s.query(item));
          },
          [&, w, layers](const tsketch::RSketch& s, std::string_view item) {
            // Flat sketches have no saturation bookkeeping; correct as if
            // no layer were saturated.
            double rho = tsketch::error_probability(w, n, layers, 0);
            return tsketch::corrected_estimate(s.query(item), rho, total, w);
          }));
    } else {
      tsketch::TSketch sketch(geometry, a.seed);
      rows.push_back(score_sketch(
          sketch, choice, a.top_size, source, oracle, a.seed, a.correct,
          [](const tsketch::TSketch& s, std::string_view item) {
            return static_cast<double>(s.query(item).raw_estimate);
          },
          [n](const tsketch::TSketch& s, std::string_view item) {
            return *s.query_corrected(item, n).corrected_estimate;
          }));
    }
  }

  if (a.out.empty() || a.out == "-") {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + a.out + " for writing");
    write_csv(out, rows);
    if (!out.flush()) throw std::runtime_error("failed writing " + a.out);
  }
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::optional<uint64_t> w;
  std::optional<uint32_t> layers;
  std::optional<uint64_t> ratio;
  std::optional<uint64_t> top_size;
  std::optional<uint64_t> distinct;
  std::optional<uint64_t> total;
  std::optional<double> beta;
  uint32_t saturated = 0;
};

// Prints `key=value`, or `key=error(reason)` when the inputs are present
// but violate the quantity's constraints. Quantities whose inputs are
// missing are skipped silently.
template <typename Fn>
void print_quantity(const char* key, bool have_inputs, Fn&& compute) {
  if (!have_inputs) return;
  try {
    std::cout << key << '=' << compute() << '\n';
  } catch (const std::exception& e) {
    std::cout << key << "=error(" << e.what() << ")\n";
  }
}

void run_analyze(const AnalyzeArgs& a) {
  const bool have_bkd = a.top_size && a.layers && a.ratio;
  print_quantity("gamma", have_bkd, [&] {
    return fmt(tsketch::space_saving_geometry(*a.top_size, *a.layers, 1, *a.ratio)
                   .space.reduction_ratio);
  });

  double s_exact = 0.0;
  bool have_s = false;
  if (have_bkd) {
    try {
      s_exact = tsketch::solve_extra_layers(*a.top_size, *a.layers, 1, *a.ratio);
      have_s = true;
    } catch (const std::exception&) {
      // reported by the s_exact quantity below
    }
  }
  print_quantity("s_exact", have_bkd, [&] {
    return fmt(tsketch::solve_extra_layers(*a.top_size, *a.layers, 1, *a.ratio));
  });
  print_quantity("s_tilde", have_s, [&] {
    return std::to_string(static_cast<uint32_t>(s_exact));
  });
  print_quantity("capacity", have_s, [&] {
    uint32_t m = log2_exact(*a.top_size, "--B");
    uint32_t l = log2_exact(*a.ratio, "--d");
    uint32_t extra = static_cast<uint32_t>(s_exact);
    if (m + extra * l > 63) {
      throw std::invalid_argument("capacity exceeds the 64-bit counter limit");
    }
    return std::to_string(uint64_t{1} << (m + extra * l));
  });

  tsketch::AnalyticContext ctx;
  ctx.counters_per_layer = a.w.value_or(0);
  ctx.layers = a.layers.value_or(0);
  ctx.distinct_items = a.distinct.value_or(0);
  ctx.stream_total = a.total.value_or(a.distinct.value_or(0));
  ctx.bound_scale = a.beta.value_or(0.0);

  const bool have_rho = a.w && a.layers && a.distinct;
  print_quantity("rho", have_rho, [&] {
    return fmt(tsketch::error_probability(ctx, a.saturated));
  });
  print_quantity("error_bound", a.w && a.layers && a.beta, [&] {
    return fmt(tsketch::error_bound(ctx, a.saturated));
  });
  print_quantity("corrected_error_bound", have_rho && a.beta, [&] {
    return fmt(tsketch::corrected_error_bound(ctx, a.saturated));
  });
  print_quantity("phi", have_rho && a.beta, [&] {
    return fmt(tsketch::phi_ratio(ctx, a.saturated));
  });
  print_quantity("beta1", have_rho && a.beta, [&] {
    return fmt(tsketch::corrected_noise(ctx, a.saturated, 0.0).scaled_bound);
  });
  print_quantity("mu", have_rho && have_s, [&] {
    uint32_t extra = static_cast<uint32_t>(s_exact);
    return fmt(tsketch::mu_ratio(ctx, a.saturated, extra));
  });
}

// ------------------------------------------------------------ build / query

struct BuildArgs {
  std::string input;
  std::string out;
  std::string variant = "sp";
  uint64_t top_size = 65536;
  uint32_t layers = 4;
  uint64_t ratio = 2;
  uint64_t w = 0;
  uint64_t memory_bits = 0;
  uint64_t seed = 0;
};

void run_build(const BuildArgs& a) {
  std::vector<VariantChoice> parsed = parse_variants(a.variant);
  if (parsed.size() != 1) throw UsageError("--variant takes exactly one of cm, cu, sp, ca");
  VariantChoice choice = parsed[0];

  if ((a.w == 0) == (a.memory_bits == 0)) {
    throw UsageError("provide exactly one of --w and --memory-bits");
  }
  uint64_t w = a.w;
  if (a.memory_bits != 0) {
    uint64_t row_bits = geometry_for(choice, a.top_size, a.layers, a.ratio, 1).slice_bits();
    w = a.memory_bits / row_bits;
    if (w == 0) {
      throw UsageError("--memory-bits too small for one counter per layer (row needs " +
                       std::to_string(row_bits) + " bits)");
    }
  }
  tsketch::SketchGeometry geometry = geometry_for(choice, a.top_size, a.layers, a.ratio, w);

  StreamSource source;
  source.path = a.input;

  std::vector<uint8_t> bytes;
  uint64_t inserted = 0;
  if (choice == VariantChoice::CM || choice == VariantChoice::CU) {
    tsketch::UpdateRule rule = choice == VariantChoice::CM
                                   ? tsketch::UpdateRule::CountMin
                                   : tsketch::UpdateRule::ConservativeUpdate;
    tsketch::RSketch sketch(geometry, a.seed, rule);
    source.for_each([&](const std::string& item) { sketch.insert(item); });
    inserted = sketch.total_count();
    bytes = tsketch::serialize(sketch);
  } else {
    tsketch::TSketch sketch(geometry, a.seed);
    source.for_each([&](const std::string& item) { sketch.insert(item); });
    inserted = sketch.total_count();
    bytes = tsketch::serialize(sketch);
  }

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + a.out + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw std::runtime_error("failed writing " + a.out);

  std::cout << "variant=" << variant_token(choice) << " w=" << w
            << " layers=" << geometry.layers() << " items=" << inserted
            << " bytes=" << bytes.size() << " out=" << a.out << '\n';
}

struct QueryArgs {
  std::string sketch_path;
  std::vector<std::string> items;
  std::optional<uint64_t> distinct;
};

void run_query(const QueryArgs& a) {
  std::ifstream in(a.sketch_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + a.sketch_path + " for reading");
  std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>()};
  tsketch::AnySketch sketch = tsketch::deserialize_any(bytes);

  std::vector<std::string> items = a.items;
  if (items.empty()) {
    std::string line;
    while (std::getline(std::cin, line)) items.push_back(line);
  }
  if (items.empty()) throw UsageError("no items to query (use --item or pipe one per line)");

  for (const std::string& item : items) {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, tsketch::TSketch>) {
            tsketch::QueryResult r = a.distinct ? s.query_corrected(item, *a.distinct)
                                                : s.query(item);
            std::cout << "item=" << item << " estimate=" << r.raw_estimate
                      << " saturated_layers=" << r.saturated_layers
                      << " all_saturated=" << (r.all_saturated ? 1 : 0);
            if (r.corrected_estimate) {
              std::cout << " corrected=" << fmt(*r.corrected_estimate);
            }
            std::cout << '\n';
          } else {
            uint64_t raw = s.query(item);
            std::cout << "item=" << item << " estimate=" << raw;
            if (a.distinct) {
              double rho = tsketch::error_probability(
                  s.geometry().counters_per_layer, *a.distinct,
                  s.geometry().layers(), 0);
              std::cout << " corrected="
                        << fmt(tsketch::corrected_estimate(
                               raw, rho, s.total_count(),
                               s.geometry().counters_per_layer));
            }
            std::cout << '\n';
          }
        },
        sketch);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layered frequency-estimation sketches: build, query, benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "write a seeded Zipfian item stream, one item per line");
  generate->add_option("--skew", gen.skew, "Zipf exponent (0 = uniform)")
      ->capture_default_str();
  generate->add_option("--distinct", gen.distinct, "number of distinct ranks")
      ->required();
  generate->add_option("--total", gen.total, "stream length")->required();
  generate->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  generate->add_option("--out", gen.out, "output file")->required();
  generate->callback([&gen] { run_generate(gen); });

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "score sketch variants against an exact oracle, emit CSV");
  bench_cmd->add_option("--input", bench.input, "stream file (one item per line)");
  bench_cmd->add_option("--skew", bench.skew, "Zipf exponent for a generated stream")
      ->capture_default_str();
  bench_cmd->add_option("--distinct", bench.distinct, "distinct ranks for a generated stream");
  bench_cmd->add_option("--total", bench.total, "length of the generated stream");
  bench_cmd->add_option("--B", bench.top_size, "reference counter size (power of two)")
      ->capture_default_str();
  bench_cmd->add_option("--k", bench.layers, "layer count for cm/cu/sp")
      ->capture_default_str();
  bench_cmd->add_option("--d", bench.ratio, "layer size ratio for sp (power of two)")
      ->capture_default_str();
  bench_cmd->add_option("--w", bench.w, "counters per layer (exclusive with --memory-bits)");
  bench_cmd->add_option("--memory-bits", bench.memory_bits,
                        "total bit budget; each variant derives w = floor(budget / row bits)");
  bench_cmd->add_option("--seed", bench.seed, "sketch hash seed (and stream seed when generated)")
      ->capture_default_str();
  bench_cmd->add_flag("--correct", bench.correct,
                      "also score noise-corrected estimates (fills the *_corrected columns)");
  bench_cmd->add_option("--variants", bench.variants,
                        "comma list of sketches to score: cm, cu, sp, ca")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV destination (default stdout)");
  bench_cmd->footer(
      "CSV schema (one row per variant, stable column order):\n"
      "  variant,w,k,d,B,aae,are,aae_corrected,are_corrected,space_bits,\n"
      "  occupation_ratio,capacity,seed,are_skipped\n"
      "aae/are average |estimate-truth| (and its ratio to truth) over the\n"
      "distinct items of the stream; *_corrected are empty without --correct;\n"
      "are_skipped counts zero-truth items excluded from are. Identical flags\n"
      "produce bit-identical output.");
  bench_cmd->callback([&bench] { run_bench(bench); });

  AnalyzeArgs ana;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "print analytic quantities for a sketch configuration");
  analyze->add_option("--w", ana.w, "counters per layer");
  analyze->add_option("--k", ana.layers, "layer count");
  analyze->add_option("--d", ana.ratio, "layer size ratio (power of two)");
  analyze->add_option("--B", ana.top_size, "reference counter size (power of two)");
  analyze->add_option("--n", ana.distinct, "distinct items in the stream");
  analyze->add_option("--N", ana.total, "stream length");
  analyze->add_option("--beta", ana.beta, "error tolerance scale");
  analyze->add_option("--i", ana.saturated, "saturated layer count")
      ->capture_default_str();
  analyze->footer(
      "Prints key=value lines for every quantity its inputs allow:\n"
      "  gamma                  space reduction ratio        needs --B --k --d\n"
      "  s_exact/s_tilde        fundable extra layers        needs --B --k --d\n"
      "  capacity               top counter size with extras needs --B --k --d\n"
      "  rho                    error probability            needs --w --k --n\n"
      "  error_bound            raw-estimate guarantee       needs --w --k --beta\n"
      "  corrected_error_bound  corrected-estimate guarantee needs --w --k --n --beta\n"
      "  phi                    corrected/raw bound ratio    needs --w --k --n --beta\n"
      "  beta1                  corrected noise scale        needs --w --k --n --beta\n"
      "  mu                     residual-noise ratio         needs --w --k --n --B --d\n"
      "Constraint violations print as key=error(reason) and do not abort the rest.");
  analyze->callback([&ana] { run_analyze(ana); });

  BuildArgs build;
  CLI::App* build_cmd = app.add_subcommand(
      "build", "ingest a stream file and serialize the resulting sketch");
  build_cmd->add_option("--input", build.input, "stream file (one item per line)")
      ->required();
  build_cmd->add_option("--out", build.out, "sketch file to write")->required();
  build_cmd->add_option("--variant", build.variant, "cm, cu, sp, or ca")
      ->capture_default_str();
  build_cmd->add_option("--B", build.top_size, "reference counter size (power of two)")
      ->capture_default_str();
  build_cmd->add_option("--k", build.layers, "layer count for cm/cu/sp")
      ->capture_default_str();
  build_cmd->add_option("--d", build.ratio, "layer size ratio for sp (power of two)")
      ->capture_default_str();
  build_cmd->add_option("--w", build.w, "counters per layer (exclusive with --memory-bits)");
  build_cmd->add_option("--memory-bits", build.memory_bits, "total bit budget");
  build_cmd->add_option("--seed", build.seed, "sketch hash seed")->capture_default_str();
  build_cmd->callback([&build] { run_build(build); });

  QueryArgs query;
  CLI::App* query_cmd = app.add_subcommand(
      "query", "load a sketch file and print frequency estimates");
  query_cmd->add_option("--sketch", query.sketch_path, "sketch file from `build`")
      ->required();
  query_cmd->add_option("--item", query.items,
                        "item to estimate (repeatable; stdin lines when absent)");
  query_cmd->add_option("--n", query.distinct,
                        "distinct-item count; enables corrected estimates");
  query_cmd->callback([&query] { run_query(query); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
