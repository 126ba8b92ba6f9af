// xafcm command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 data or I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xafcm/xafcm.hpp"

namespace fs = std::filesystem;
using namespace xafcm;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed for '" + path.string() + "'");
  return buf.str();
}

// Writes to "<path>.tmp" and renames, so a failed run leaves nothing behind.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into '" + target.string() + "'");
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct InputOptions {
  std::string alphabet = "dna";
  std::string format = "auto";
  std::string unknown = "reject";
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--alphabet", in.alphabet, "symbols, or a preset: dna, sax<N>")
      ->capture_default_str();
  cmd->add_option("--format", in.format, "input format")
      ->check(CLI::IsMember({"auto", "raw", "fasta"}))
      ->capture_default_str();
  cmd->add_option("--unknown", in.unknown, "unknown symbols in FASTA input")
      ->check(CLI::IsMember({"reject", "drop"}))
      ->capture_default_str();
}

SymbolSequence load_sequence(const fs::path& path, const Alphabet& alphabet, const InputOptions& in) {
  const std::string text = read_file(path);
  std::string format = in.format;
  if (format == "auto") {
    const auto first = text.find_first_not_of(" \t\r\n");
    format = first != std::string::npos && (text[first] == '>' || text[first] == ';') ? "fasta" : "raw";
  }
  try {
    if (format == "raw") return parse_raw(text, alphabet);
    const auto policy = in.unknown == "drop" ? UnknownSymbolPolicy::Drop : UnknownSymbolPolicy::Reject;
    auto parsed = parse_fasta(text, alphabet, policy);
    if (parsed.dropped > 0) {
      std::cerr << "xafcm: dropped " << parsed.dropped << " unknown symbols from " << path.string() << "\n";
    }
    return std::move(parsed.sequence);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what(), e.position());
  }
}

struct ModelOptions {
  std::size_t k = 0;
  std::size_t d = 1;
  std::string alpha = "auto";
};

void add_model_options(CLI::App* cmd, ModelOptions& m, bool required_k) {
  auto* k = cmd->add_option("-k,--order", m.k, "context order")->check(CLI::PositiveNumber);
  if (required_k) k->required();
  cmd->add_option("-d,--depth", m.d, "symbols predicted per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--alpha", m.alpha, "estimator parameter: decimal or 'auto'")->capture_default_str();
}

ModelParams make_params(const Alphabet& alphabet, const ModelOptions& m) {
  return ModelParams::make(alphabet, m.k, m.d, AlphaSetting::parse(m.alpha));
}

// "label=path"
std::pair<std::string, std::string> split_labeled(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw CLI::ValidationError("expected label=path, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

// Files sharing a label are concatenated in the order given.
std::vector<LabeledSequence> load_labeled(const std::vector<std::string>& args, const Alphabet& alphabet,
                                          const InputOptions& in) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<SymbolSequence>> parts;
  for (const auto& a : args) {
    auto [label, path] = split_labeled(a);
    if (!parts.count(label)) order.push_back(label);
    parts[label].push_back(load_sequence(path, alphabet, in));
  }
  std::vector<LabeledSequence> out;
  for (const auto& label : order) out.push_back({label, concatenate(parts[label])});
  return out;
}

class Timings {
 public:
  explicit Timings(bool enabled) : enabled_(enabled) {}

  template <class F>
  auto measure(const char* key, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    data_[key] = data_.value(key, 0.0) +
                 std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }
  void set(const char* key, nlohmann::json v) { data_[key] = std::move(v); }
  void emit() const {
    if (enabled_) std::cerr << data_.dump() << "\n";
  }

 private:
  bool enabled_;
  nlohmann::json data_ = nlohmann::json::object();
};

std::vector<double> read_numbers(const fs::path& path, std::optional<std::size_t> column) {
  std::istringstream in(read_file(path));
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::string field = line;
    if (column) {
      std::size_t start = 0;
      for (std::size_t c = 0; c < *column; ++c) {
        start = line.find(',', start);
        if (start == std::string::npos) {
          throw Error(ErrorCode::FormatError,
                      path.string() + ":" + std::to_string(line_no) + ": missing column " +
                          std::to_string(*column));
        }
        ++start;
      }
      field = line.substr(start, line.find(',', start) - start);
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
      out.push_back(v);
    } catch (const std::exception&) {
      // A non-numeric first row is a CSV header.
      if (out.empty() && line_no == 1) continue;
      throw Error(ErrorCode::FormatError,
                  path.string() + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xaFCM: extended-alphabet finite-context models for sequence similarity"};
  app.require_subcommand(1);
  app.fallthrough();
  bool timings_flag = false;
  app.add_flag("--timings", timings_flag, "print a JSON timing record to stderr");

  // learn
  InputOptions learn_in;
  ModelOptions learn_m;
  std::string learn_ref, learn_out;
  auto* learn_cmd = app.add_subcommand("learn", "train a model on a reference and save it");
  learn_cmd->add_option("-r,--reference", learn_ref, "reference sequence file")->required();
  learn_cmd->add_option("-o,--output", learn_out, "model file")->required();
  add_model_options(learn_cmd, learn_m, true);
  add_input_options(learn_cmd, learn_in);

  // nrc and profile share how the model is obtained
  struct ScoreArgs {
    InputOptions in;
    ModelOptions m;
    std::string model_path, ref, target, out;
    std::size_t window = 1;
  };
  ScoreArgs nrc_a, prof_a;
  auto* nrc_cmd = app.add_subcommand("nrc", "normalized relative compression of a target");
  auto* prof_cmd = app.add_subcommand("profile", "per-position information profile of a target");
  for (auto [cmd, a] : {std::pair{nrc_cmd, &nrc_a}, std::pair{prof_cmd, &prof_a}}) {
    auto* model_opt = cmd->add_option("-m,--model", a->model_path, "saved model file");
    auto* ref_opt = cmd->add_option("-r,--reference", a->ref, "reference sequence file");
    model_opt->excludes(ref_opt);
    cmd->add_option("-t,--target", a->target, "target sequence file")->required();
    cmd->add_option("-o,--output", a->out, "output file (default stdout)");
    add_model_options(cmd, a->m, false);
    add_input_options(cmd, a->in);
  }
  bool nrc_details = false;
  nrc_cmd->add_flag("--details", nrc_details, "print bits, length and query count as well");
  prof_cmd->add_option("-w,--window", prof_a.window, "moving-average window in blocks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // matrix
  InputOptions mat_in;
  ModelOptions mat_m;
  std::vector<std::string> mat_refs, mat_targets;
  std::string mat_cache, mat_journal, mat_out;
  std::size_t mat_workers = 1;
  auto* mat_cmd = app.add_subcommand("matrix", "NRC of every target against every reference");
  mat_cmd->add_option("--ref", mat_refs, "label=path, repeatable")->required();
  mat_cmd->add_option("--target", mat_targets, "label=path, repeatable (default: the references)");
  mat_cmd->add_option("--cache-dir", mat_cache, "directory for learned models");
  mat_cmd->add_option("--journal", mat_journal, "append-only cell journal for resuming");
  mat_cmd->add_option("--workers", mat_workers)->check(CLI::PositiveNumber)->capture_default_str();
  mat_cmd->add_option("-o,--output", mat_out, "CSV output (default stdout)");
  add_model_options(mat_cmd, mat_m, true);
  add_input_options(mat_cmd, mat_in);

  // quantize
  std::string q_signal, q_peaks, q_out;
  std::optional<std::size_t> q_column;
  std::size_t q_sps = 200, q_a = 6;
  auto* q_cmd = app.add_subcommand("quantize", "SAX-quantize a peak-annotated signal");
  q_cmd->add_option("--signal", q_signal, "samples, one per line or a CSV column")->required();
  q_cmd->add_option("--peaks", q_peaks, "peak sample indices, one per line")->required();
  q_cmd->add_option("--column", q_column, "0-based CSV column of the signal");
  q_cmd->add_option("--symbols-per-segment", q_sps)->check(CLI::PositiveNumber)->capture_default_str();
  q_cmd->add_option("--alphabet-size", q_a)->check(CLI::Range(3, 20))->capture_default_str();
  q_cmd->add_option("-o,--output", q_out, "symbol text output (default stdout)");

  // classify
  InputOptions cls_in;
  ModelOptions cls_m;
  std::vector<std::string> cls_train, cls_test;
  std::string cls_out, cls_confusion, cls_score = "nrc";
  std::size_t cls_len = 2000, cls_stride = 0, cls_workers = 1;
  auto* cls_cmd = app.add_subcommand("classify", "train one model per label and classify test segments");
  cls_cmd->add_option("--train", cls_train, "label=path, repeatable")->required();
  cls_cmd->add_option("--test", cls_test, "label=path, repeatable")->required();
  cls_cmd->add_option("--segment-len", cls_len)->check(CLI::PositiveNumber)->capture_default_str();
  cls_cmd->add_option("--stride", cls_stride, "segment stride (0 = segment length)")->capture_default_str();
  cls_cmd->add_option("--score", cls_score, "decision score")
      ->check(CLI::IsMember({"nrc", "bits"}))
      ->capture_default_str();
  cls_cmd->add_option("--workers", cls_workers)->check(CLI::PositiveNumber)->capture_default_str();
  cls_cmd->add_option("-o,--output", cls_out, "per-segment CSV report (default stdout)");
  cls_cmd->add_option("--confusion", cls_confusion, "confusion-matrix CSV");
  add_model_options(cls_cmd, cls_m, true);
  add_input_options(cls_cmd, cls_in);

  // alpha
  std::size_t al_size = 0, al_d = 1;
  double al_conf = kDefaultConfidence;
  auto* al_cmd = app.add_subcommand("alpha", "print the automatically chosen alpha");
  al_cmd->add_option("-a,--alphabet-size", al_size)->required()->check(CLI::Range(2, 256));
  al_cmd->add_option("-d,--depth", al_d)->check(CLI::PositiveNumber)->capture_default_str();
  al_cmd->add_option("-p,--confidence", al_conf)->capture_default_str();

  // synth
  std::string sy_kind = "uniform", sy_alphabet = "dna", sy_input, sy_out;
  std::size_t sy_len = 1000, sy_order = 2;
  std::uint64_t sy_seed = 1, sy_source_seed = 1;
  double sy_rate = 0.1, sy_conc = 1.0;
  auto* sy_cmd = app.add_subcommand("synth", "write seeded synthetic sequences");
  sy_cmd->add_option("--kind", sy_kind)
      ->check(CLI::IsMember({"uniform", "mutate", "markov"}))
      ->capture_default_str();
  sy_cmd->add_option("--alphabet", sy_alphabet)->capture_default_str();
  sy_cmd->add_option("--length", sy_len)->capture_default_str();
  sy_cmd->add_option("--seed", sy_seed)->capture_default_str();
  sy_cmd->add_option("--input", sy_input, "sequence to mutate (raw text)");
  sy_cmd->add_option("--rate", sy_rate, "substitution rate for mutate")->capture_default_str();
  sy_cmd->add_option("--order", sy_order, "Markov order")->capture_default_str();
  sy_cmd->add_option("--concentration", sy_conc, "Dirichlet concentration of Markov rows")
      ->capture_default_str();
  sy_cmd->add_option("--source-seed", sy_source_seed, "seed of the Markov transition table")
      ->capture_default_str();
  sy_cmd->add_option("-o,--output", sy_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  Timings timings(timings_flag);
  try {
    if (*learn_cmd) {
      const auto alphabet = Alphabet::parse_spec(learn_in.alphabet);
      const auto params = make_params(alphabet, learn_m);
      const auto ref = load_sequence(learn_ref, alphabet, learn_in);
      const auto model = timings.measure("learn_ms", [&] { return learn(ref, params); });
      std::ostringstream buf;
      save_model(model, buf);
      write_output(learn_out, buf.str());
    } else if (*nrc_cmd || *prof_cmd) {
      const ScoreArgs& a = *nrc_cmd ? nrc_a : prof_a;
      std::optional<XaModel> model;
      if (!a.model_path.empty()) {
        model = timings.measure("load_ms", [&] { return load_model_file(a.model_path); });
      } else if (!a.ref.empty()) {
        if (a.m.k == 0) throw CLI::ValidationError("-k is required with --reference");
        const auto alphabet = Alphabet::parse_spec(a.in.alphabet);
        const auto params = make_params(alphabet, a.m);
        const auto ref = load_sequence(a.ref, alphabet, a.in);
        model = timings.measure("learn_ms", [&] { return learn(ref, params); });
      } else {
        throw CLI::ValidationError("one of --model or --reference is required");
      }
      const auto target = load_sequence(a.target, model->params().alphabet(), a.in);
      std::string text;
      if (*nrc_cmd) {
        const auto r = timings.measure("compress_ms", [&] {
          return compress_bits(target, *model, {.keep_blocks = false});
        });
        timings.set("query_count", r.query_count);
        text = nrc_details ? "nrc\tbits\tlength\tqueries\n" + fixed6(r.nrc()) + "\t" + fixed6(r.total_bits) +
                                 "\t" + std::to_string(r.target_length) + "\t" +
                                 std::to_string(r.query_count) + "\n"
                           : fixed6(r.nrc()) + "\n";
      } else {
        const auto profile =
            timings.measure("compress_ms", [&] { return information_profile(target, *model, a.window); });
        std::ostringstream out;
        out << "position\tbits_per_symbol\n";
        for (const auto& p : profile) out << p.position << "\t" << fixed6(p.bits_per_symbol) << "\n";
        text = out.str();
      }
      write_output(a.out, text);
    } else if (*mat_cmd) {
      const auto alphabet = Alphabet::parse_spec(mat_in.alphabet);
      const auto params = make_params(alphabet, mat_m);
      const auto refs = load_labeled(mat_refs, alphabet, mat_in);
      const auto targets = mat_targets.empty() ? refs : load_labeled(mat_targets, alphabet, mat_in);
      MatrixOptions opt;
      if (!mat_cache.empty()) opt.cache_dir = mat_cache;
      if (!mat_journal.empty()) opt.journal = mat_journal;
      opt.workers = mat_workers;
      const auto run = timings.measure("matrix_ms", [&] { return pairwise_nrc(refs, targets, params, opt); });
      timings.set("models_learned", run.models_learned);
      timings.set("models_loaded", run.models_loaded);
      timings.set("cells_computed", run.cells_computed);
      timings.set("cells_resumed", run.cells_resumed);
      std::ostringstream out;
      write_matrix_csv(run.matrix, out);
      write_output(mat_out, out.str());
    } else if (*q_cmd) {
      AnnotatedSignal signal;
      signal.samples = read_numbers(q_signal, q_column);
      for (double p : read_numbers(q_peaks, std::nullopt)) {
        if (p < 0 || p != static_cast<double>(static_cast<std::size_t>(p))) {
          throw Error(ErrorCode::InvalidPeaks, "peak indices must be non-negative integers");
        }
        signal.peak_indices.push_back(static_cast<std::size_t>(p));
      }
      const auto seq = quantize_signal(signal, SaxConfig::make(q_sps, q_a));
      write_output(q_out, seq.to_string() + "\n");
    } else if (*cls_cmd) {
      const auto alphabet = Alphabet::parse_spec(cls_in.alphabet);
      const auto params = make_params(alphabet, cls_m);
      const auto train = load_labeled(cls_train, alphabet, cls_in);
      const auto test = load_labeled(cls_test, alphabet, cls_in);
      const auto models =
          timings.measure("learn_ms", [&] { return train_class_models(train, params, cls_workers); });
      EvaluateOptions opt{.segment_len = cls_len,
                          .stride = cls_stride,
                          .workers = cls_workers,
                          .score = cls_score == "bits" ? DecisionScore::Bits : DecisionScore::Nrc};
      const auto report = timings.measure("compress_ms", [&] { return evaluate(test, models, opt); });

      std::ostringstream out;
      out << "segment_id,true_label,predicted_label";
      for (const auto& l : report.labels) out << "," << cls_score << "_" << l;
      out << "\n";
      for (const auto& d : report.decisions) {
        out << d.segment_id << "," << d.true_label.value_or("") << "," << d.predicted_label;
        for (double s : d.scores) out << "," << fixed6(s);
        out << "\n";
      }
      std::ostringstream conf;
      conf << "true\\predicted";
      for (const auto& l : report.labels) conf << "," << l;
      conf << "\n";
      for (std::size_t i = 0; i < report.labels.size(); ++i) {
        conf << report.labels[i];
        for (auto n : report.confusion[i]) conf << "," << n;
        conf << "\n";
      }
      if (!cls_confusion.empty()) write_output(cls_confusion, conf.str());
      write_output(cls_out, out.str());

      std::uint64_t hits = 0, total = 0;
      for (std::size_t i = 0; i < report.confusion.size(); ++i) {
        for (std::size_t j = 0; j < report.confusion[i].size(); ++j) {
          total += report.confusion[i][j];
          if (i == j) hits += report.confusion[i][j];
        }
      }
      const auto acc = report.accuracy();
      std::cerr << "accuracy " << (acc ? fixed6(*acc) : std::string("n/a")) << " (" << hits << "/" << total
                << " segments, " << report.dropped_symbols << " symbols dropped)\n";
    } else if (*al_cmd) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g\n", solve_alpha(al_size, al_d, al_conf));
      write_output("", buf);
    } else if (*sy_cmd) {
      const auto alphabet = Alphabet::parse_spec(sy_alphabet);
      SymbolSequence seq;
      if (sy_kind == "uniform") {
        seq = synthetic::uniform(alphabet, sy_len, sy_seed);
      } else if (sy_kind == "mutate") {
        if (sy_input.empty()) throw CLI::ValidationError("--input is required for --kind mutate");
        seq = synthetic::mutate(parse_raw(read_file(sy_input), alphabet), sy_rate, sy_seed);
      } else {
        seq = synthetic::MarkovSource(alphabet, sy_order, sy_conc, sy_source_seed).generate(sy_len, sy_seed);
      }
      write_output(sy_out, seq.to_string() + "\n");
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "xafcm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "xafcm: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "xafcm: " << e.what() << "\n";
    return kExitData;
  }
  timings.emit();
  return 0;
}
