#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "indeval/bounds.hpp"
#include "indeval/corpus_io.hpp"
#include "indeval/error.hpp"
#include "indeval/estimation.hpp"
#include "indeval/metrics.hpp"
#include "indeval/serialize.hpp"
#include "indeval/simulator.hpp"

namespace indeval::cli {
namespace {

namespace fs = std::filesystem;

// Raised for flag combinations CLI11 cannot express; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + std::string(what) + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Corpus load_corpus(const std::string& path) {
  try {
    return parse_corpus(read_file(path, "corpus file"));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<AuditRecord> load_audits(const std::string& path) {
  try {
    return parse_audits(read_file(path, "audit file"));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

void print_json(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump() << '\n'; }

// Fails with exit 1 on error-severity violations; prints warnings.
void check_valid(const Corpus& corpus, std::ostream& err) {
  const auto report = validate_corpus(corpus);
  for (const auto& v : report) {
    err << (v.severity == Severity::error ? "error" : "warning") << ": "
        << (v.item_id.empty() ? std::string("corpus") : "item '" + v.item_id + "'") << ": "
        << v.rule << " (" << v.detail << ")\n";
  }
  if (has_errors(report)) throw DataError("corpus failed validation");
}

struct SimulatorFlags {
  SimulationConfig config;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  void add_to(CLI::App& app, bool with_pi) {
    app.add_option("--items", config.n_items, "Items per corpus")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--labels", config.alphabet_size, "Alphabet size K")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
        ->capture_default_str();
    if (with_pi) {
      app.add_option("--pi", config.pi, "Indeterminacy proportion")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
    }
    app.add_option("--raters", config.raters_per_item, "Raters per item")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--epsilon", config.rater_error, "Rater error probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--competence", config.llm_competence, "Model competence")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--vrs-max", config.vrs_max, "Maximum VRS size")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
        ->capture_default_str();
    app.add_option("--alpha-dirichlet", config.dirichlet_alpha,
                   "Interpretation-weight concentration")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
  }

  void validate() const {
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      static const std::pair<std::string_view, std::string_view> kFlagFor[] = {
          {"n_items", "--items"},           {"alphabet_size", "--labels"},
          {"pi", "--pi"},                   {"vrs_max", "--vrs-max"},
          {"raters_per_item", "--raters"},  {"rater_error", "--epsilon"},
          {"llm_competence", "--competence"}, {"dirichlet_alpha", "--alpha-dirichlet"}};
      std::string msg = e.what();
      for (auto [field, flag] : kFlagFor) {
        if (msg.starts_with(std::string(field) + " ")) {
          msg = std::string(flag) + msg.substr(field.size());
          break;
        }
      }
      throw UsageError(msg);
    }
  }
};

int cmd_simulate(const SimulatorFlags& flags, const std::string& out_path, std::ostream& out) {
  flags.validate();
  const auto sim = simulate_corpus(flags.config, flags.threads);
  write_file_atomic(out_path, write_corpus(sim.corpus));
  std::size_t indeterminate = 0;
  for (const auto& t : sim.truth.items) indeterminate += t.vrs.is_indeterminate();
  nlohmann::ordered_json summary;
  summary["n_items"] = sim.corpus.size();
  summary["realized_pi"] =
      static_cast<double>(indeterminate) / static_cast<double>(sim.corpus.size());
  print_json(out, summary);
  return kExitOk;
}

int cmd_evaluate(const std::string& corpus_path, bool require_vrs, std::ostream& out,
                 std::ostream& err) {
  const Corpus corpus = load_corpus(corpus_path);
  check_valid(corpus, err);
  if (require_vrs) {
    for (const auto& item : corpus.items) {
      if (!item.vrs) throw DataError("item '" + item.item_id + "' has no vrs (--require-vrs)");
    }
  }
  print_json(out, to_json(evaluate(corpus)));
  return kExitOk;
}

void print_interval(std::ostream& out, std::ostream& err, const PerformanceInterval& interval) {
  err << "interval holds under: ";
  for (std::size_t i = 0; i < interval.assumptions().size(); ++i) {
    err << (i ? ", " : "") << interval.assumptions()[i];
  }
  err << '\n';
  print_json(out, to_json(interval));
}

struct PrevalenceFlags {
  std::string corpus;
  std::optional<double> pi;
  std::optional<std::string> audit;
  std::optional<double> alpha;
};

int cmd_bound_prevalence(const PrevalenceFlags& f, std::ostream& out, std::ostream& err) {
  if (f.pi.has_value() == f.audit.has_value()) {
    throw UsageError("bound prevalence needs exactly one of --pi or --audit");
  }
  if (f.audit && !f.alpha) throw UsageError("--audit requires --alpha");
  const Corpus corpus = load_corpus(f.corpus);
  check_valid(corpus, err);
  if (f.pi) {
    print_interval(out, err, prevalence_interval(corpus, *f.pi));
    return kExitOk;
  }
  const auto audits = load_audits(*f.audit);
  (void)merge_audit(corpus, audits);  // rejects unknown or conflicting ids
  const auto estimate = estimate_prevalence(audits, *f.alpha);
  print_interval(out, err, widened_prevalence_interval(corpus, estimate));
  return kExitOk;
}

struct PartitionFlags {
  std::string corpus;
  bool oracle = false;
  std::optional<double> threshold;
  std::string source = "raters";
  bool flags = false;
  bool mixed = false;
};

int cmd_bound_partition(const PartitionFlags& f, std::ostream& out, std::ostream& err) {
  const int chosen = int{f.oracle} + int{f.threshold.has_value()} + int{f.flags};
  if (chosen != 1) {
    throw UsageError("bound partition needs exactly one of --oracle, --threshold or --flags");
  }
  const Corpus corpus = load_corpus(f.corpus);
  check_valid(corpus, err);
  Partition partition;
  if (f.oracle) {
    partition = oracle_partition(corpus);
  } else if (f.threshold) {
    partition = threshold_partition(
        corpus, *f.threshold,
        f.source == "llm" ? AgreementSource::llm_samples : AgreementSource::raters);
  } else {
    partition = flag_partition(corpus);
  }
  print_interval(out, err,
                 f.mixed ? mixed_interval(corpus, partition) : partition_interval(corpus, partition));
  return kExitOk;
}

int cmd_audit_draw(const std::string& corpus_path, std::size_t n, std::uint64_t seed,
                   const std::string& out_path, std::ostream& out) {
  const Corpus corpus = load_corpus(corpus_path);
  std::vector<std::string> ids;
  try {
    ids = draw_audit_sample(corpus, n, seed);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  std::ostringstream sheet;
  write_audit_worksheet(ids, sheet);
  write_file_atomic(out_path, sheet.str());
  nlohmann::ordered_json summary;
  summary["n_sampled"] = ids.size();
  print_json(out, summary);
  return kExitOk;
}

int cmd_audit_apply(const std::string& corpus_path, const std::string& audit_path,
                    const std::string& out_path, std::ostream& out) {
  const Corpus corpus = load_corpus(corpus_path);
  const auto audits = load_audits(audit_path);
  const Corpus merged = merge_audit(corpus, audits);
  write_file_atomic(out_path, write_corpus(merged));
  nlohmann::ordered_json summary;
  summary["n_items"] = merged.size();
  summary["n_audits"] = audits.size();
  print_json(out, summary);
  return kExitOk;
}

int cmd_audit_estimate(const std::string& audit_path, double alpha, std::ostream& out) {
  const auto audits = load_audits(audit_path);
  if (audits.empty()) throw DataError("audit file '" + audit_path + "' has no records");
  print_json(out, to_json(estimate_prevalence(audits, alpha)));
  return kExitOk;
}

int cmd_sweep(const SimulatorFlags& flags, const std::string& grid_text, std::size_t replicates,
              double tau, const std::string& out_path, std::ostream& out) {
  std::vector<double> grid;
  try {
    grid = parse_pi_grid(grid_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--pi-grid: ") + e.what());
  }
  flags.validate();
  const auto table = sweep_indeterminacy(flags.config, grid, replicates, tau, flags.threads);
  std::ostringstream csv;
  write_sweep_csv(table, csv);
  write_file_atomic(out_path, csv.str());
  print_json(out, to_json(summarize_sweep(table)));
  return kExitOk;
}

const CLI::Validator kOpenUnitInterval(
    [](std::string& value) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(value, v) || !(v > 0.0 && v < 1.0)) {
        return "value " + value + " must lie strictly between 0 and 1";
      }
      return {};
    },
    "(0, 1)");

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("'" + std::string(text) + "' is not a number");
  }
  return value;
}

}  // namespace

std::vector<double> parse_pi_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
      throw std::invalid_argument("range must be start:stop:step");
    }
    const double start = parse_number(text.substr(0, first));
    const double stop = parse_number(text.substr(first + 1, second - first - 1));
    const double step = parse_number(text.substr(second + 1));
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (stop < start) throw std::invalid_argument("stop must not be below start");
    constexpr double kSlack = 1e-9;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + kSlack)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Snap to 12 decimals so 0:1:0.1 yields 0.3 rather than 0.30000000000000004.
      double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
      if (std::abs(v - stop) <= kSlack) v = stop;
      grid.push_back(v);
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = std::min(text.find(',', pos), text.size());
      grid.push_back(parse_number(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  for (double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("grid value " + std::to_string(v) + " outside [0, 1]");
    }
  }
  return grid;
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path + "'");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.close();
    if (!f) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error("cannot write '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error("cannot write '" + path + "': " + ec.message());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate forced-choice model responses under task indeterminacy", "indeval"};
  app.require_subcommand(1);

  // simulate
  SimulatorFlags sim_flags;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus with known VRSs");
  sim_flags.add_to(*simulate, true);
  simulate->add_option("--out", sim_out, "Output corpus JSONL")->required();

  // evaluate
  std::string eval_corpus;
  bool require_vrs = false;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Gold-label and true-performance metrics");
  evaluate_cmd->add_option("--corpus", eval_corpus, "Corpus JSONL")->required();
  evaluate_cmd->add_flag("--require-vrs", require_vrs, "Fail if any item lacks a VRS");

  // bound
  auto* bound = app.add_subcommand("bound", "Performance intervals from partial knowledge");
  bound->require_subcommand(1);

  PrevalenceFlags prev;
  auto* prevalence = bound->add_subcommand("prevalence", "Interval from an indeterminacy rate");
  prevalence->add_option("--corpus", prev.corpus, "Corpus JSONL")->required();
  auto* pi_opt = prevalence->add_option("--pi", prev.pi, "Known indeterminate fraction")
                     ->check(CLI::Range(0.0, 1.0));
  auto* audit_opt = prevalence->add_option("--audit", prev.audit, "Completed audit JSONL");
  auto* alpha_opt = prevalence->add_option("--alpha", prev.alpha, "Audit significance level")
                        ->check(kOpenUnitInterval);
  pi_opt->excludes(audit_opt);
  pi_opt->excludes(alpha_opt);
  alpha_opt->needs(audit_opt);

  PartitionFlags part;
  auto* partition = bound->add_subcommand("partition", "Interval from a determinate/indeterminate split");
  partition->add_option("--corpus", part.corpus, "Corpus JSONL")->required();
  auto* oracle_opt = partition->add_flag("--oracle", part.oracle, "Split by VRS size");
  auto* threshold_opt = partition->add_option("--threshold", part.threshold,
                                              "Agreement below this is indeterminate")
                            ->check(CLI::Range(0.0, 1.0));
  auto* source_opt = partition->add_option("--agreement-source", part.source, "raters or llm")
                         ->check(CLI::IsMember({"raters", "llm"}));
  auto* flags_opt = partition->add_flag("--flags", part.flags, "Split by audit flags");
  partition->add_flag("--mixed", part.mixed, "Use known VRSs exactly");
  oracle_opt->excludes(threshold_opt)->excludes(flags_opt);
  threshold_opt->excludes(flags_opt);
  source_opt->needs(threshold_opt);

  // audit
  auto* audit = app.add_subcommand("audit", "Audit sampling and prevalence estimation");
  audit->require_subcommand(1);

  std::string draw_corpus;
  std::size_t draw_n = 0;
  std::uint64_t draw_seed = 0;
  std::string draw_out;
  auto* draw = audit->add_subcommand("draw", "Write a blank audit worksheet for a random sample");
  draw->add_option("--corpus", draw_corpus, "Corpus JSONL")->required();
  draw->add_option("--n", draw_n, "Sample size")->required()->check(CLI::PositiveNumber);
  draw->add_option("--seed", draw_seed, "Random seed")->required();
  draw->add_option("--out", draw_out, "Worksheet JSONL")->required();

  std::string apply_corpus;
  std::string apply_audit;
  std::string apply_out;
  auto* apply = audit->add_subcommand("apply", "Merge audit results into a corpus");
  apply->add_option("--corpus", apply_corpus, "Corpus JSONL")->required();
  apply->add_option("--audit", apply_audit, "Completed audit JSONL")->required();
  apply->add_option("--out", apply_out, "Merged corpus JSONL")->required();

  std::string est_audit;
  double est_alpha = 0.05;
  auto* estimate = audit->add_subcommand("estimate", "Estimate the indeterminate fraction");
  estimate->add_option("--audit", est_audit, "Completed audit JSONL")->required();
  estimate->add_option("--alpha", est_alpha, "Significance level")
      ->required()
      ->check(kOpenUnitInterval);

  // sweep
  SimulatorFlags sweep_flags;
  std::string grid_text;
  std::size_t replicates = 20;
  double tau = 0.7;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Sweep the indeterminacy proportion");
  sweep_flags.add_to(*sweep, false);
  sweep->add_option("--pi-grid", grid_text, "start:stop:step or comma list")->required();
  sweep->add_option("--replicates", replicates, "Replicates per grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--tau", tau, "Agreement threshold for the heuristic partition")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim_flags, sim_out, out);
    if (*evaluate_cmd) return cmd_evaluate(eval_corpus, require_vrs, out, err);
    if (*prevalence) return cmd_bound_prevalence(prev, out, err);
    if (*partition) return cmd_bound_partition(part, out, err);
    if (*draw) return cmd_audit_draw(draw_corpus, draw_n, draw_seed, draw_out, out);
    if (*apply) return cmd_audit_apply(apply_corpus, apply_audit, apply_out, out);
    if (*estimate) return cmd_audit_estimate(est_audit, est_alpha, out);
    if (*sweep) return cmd_sweep(sweep_flags, grid_text, replicates, tau, sweep_out, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace indeval::cli
