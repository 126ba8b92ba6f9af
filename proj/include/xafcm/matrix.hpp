#ifndef XAFCM_MATRIX_HPP
#define XAFCM_MATRIX_HPP

// Reference x target NRC matrices. One model per reference (learned once, or
// reused from an on-disk cache), completed cells journaled so an interrupted
// run can resume.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xafcm/classify.hpp"
#include "xafcm/core.hpp"
#include "xafcm/detail/parallel.hpp"
#include "xafcm/error.hpp"
#include "xafcm/model.hpp"
#include "xafcm/nrc.hpp"

namespace xafcm {

struct SimilarityMatrix {
  std::vector<std::string> reference_labels;  // rows
  std::vector<std::string> target_labels;     // columns
  std::vector<double> values;                 // row-major
  ModelParams params;

  double at(std::size_t row, std::size_t col) const {
    return values.at(row * target_labels.size() + col);
  }
};

struct MatrixOptions {
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> journal;
  std::size_t workers = 1;
};

struct MatrixRun {
  SimilarityMatrix matrix;
  std::size_t models_learned = 0;
  std::size_t models_loaded = 0;
  std::size_t cells_computed = 0;
  std::size_t cells_resumed = 0;
};

/// 64-bit FNV-1a over the alphabet and symbol indices.
inline std::uint64_t content_digest(const SymbolSequence& seq) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (char c : seq.alphabet().symbols()) mix(static_cast<unsigned char>(c));
  mix(0);
  for (Symbol s : seq.data()) mix(s);
  return h;
}

/// Cache file name for a (reference content, k, d, alpha) combination.
inline std::string model_cache_name(const SymbolSequence& reference, const ModelParams& p) {
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(content_digest(reference)));
  return std::string(digest) + "-k" + std::to_string(p.k()) + "-d" + std::to_string(p.d()) +
         "-a" + detail::format_decimal(p.alpha()) + ".xaf";
}

namespace detail {

inline std::string journal_header(const ModelParams& p) {
  return "# xafcm-journal alphabet=" + std::string(p.alphabet().symbols()) +
         " k=" + std::to_string(p.k()) + " d=" + std::to_string(p.d()) +
         " alpha=" + format_decimal(p.alpha());
}

inline void check_label(const std::string& label) {
  if (label.empty() || label.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::InvalidParams,
                "labels must be non-empty and free of commas and line breaks: '" + label + "'");
  }
}

inline std::map<std::pair<std::string, std::string>, double> read_journal(
    const std::filesystem::path& path, const ModelParams& params) {
  std::map<std::pair<std::string, std::string>, double> cells;
  std::ifstream in(path, std::ios::binary);
  if (!in) return cells;
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::size_t line_no = 0;
  // Only newline-terminated lines count; a torn tail from an interrupted run is ignored.
  for (std::size_t eol; (eol = content.find('\n', pos)) != std::string::npos; pos = eol + 1) {
    const std::string line = content.substr(pos, eol - pos);
    ++line_no;
    if (line_no == 1) {
      if (line != journal_header(params)) {
        throw Error(ErrorCode::FormatError,
                    "journal " + path.string() + " was written with different parameters", 1);
      }
      continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    double v = 0;
    if (c2 != std::string::npos) {
      const char* first = line.data() + c2 + 1;
      const char* last = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && ptr == last) {
        cells[{line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1)}] = v;
        continue;
      }
    }
    throw Error(ErrorCode::FormatError, "journal " + path.string() + ": malformed cell line",
                line_no);
  }
  return cells;
}

inline std::string format_full(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// NRC of every target against a model of every reference. Rows are processed
/// in reference order; within a row the target cells run on `workers` threads.
inline MatrixRun pairwise_nrc(const std::vector<LabeledSequence>& references,
                              const std::vector<LabeledSequence>& targets,
                              const ModelParams& params, const MatrixOptions& options = {}) {
  if (references.empty()) throw Error(ErrorCode::EmptyInput, "no reference sequences");
  if (targets.empty()) throw Error(ErrorCode::EmptyInput, "no target sequences");
  auto check = [&](const std::vector<LabeledSequence>& list, const char* what) {
    std::set<std::string> seen;
    for (const auto& e : list) {
      detail::check_label(e.label);
      if (!seen.insert(e.label).second) {
        throw Error(ErrorCode::DuplicateLabel, std::string("duplicate ") + what + " label '" +
                                                   e.label + "'");
      }
      if (!(e.sequence.alphabet() == params.alphabet())) {
        throw Error(ErrorCode::AlphabetMismatch, std::string(what) + " '" + e.label +
                                                     "' is not over alphabet '" +
                                                     std::string(params.alphabet().symbols()) + "'");
      }
    }
  };
  check(references, "reference");
  check(targets, "target");

  MatrixRun run;
  auto& m = run.matrix;
  m.params = params;
  for (const auto& r : references) m.reference_labels.push_back(r.label);
  for (const auto& t : targets) m.target_labels.push_back(t.label);
  const std::size_t cols = targets.size();
  m.values.assign(references.size() * cols, 0.0);
  std::vector<bool> done(m.values.size(), false);

  std::ofstream journal;
  std::mutex journal_mutex;
  if (options.journal) {
    auto previous = detail::read_journal(*options.journal, params);
    for (std::size_t r = 0; r < references.size(); ++r) {
      for (std::size_t t = 0; t < cols; ++t) {
        auto it = previous.find({references[r].label, targets[t].label});
        if (it != previous.end()) {
          m.values[r * cols + t] = it->second;
          done[r * cols + t] = true;
          ++run.cells_resumed;
        }
      }
    }
    const bool fresh = !std::filesystem::exists(*options.journal) ||
                       std::filesystem::file_size(*options.journal) == 0;
    bool torn = false;
    if (!fresh) {
      std::ifstream tail(*options.journal, std::ios::binary | std::ios::ate);
      tail.seekg(-1, std::ios::end);
      torn = tail.get() != '\n';
    }
    journal.open(*options.journal, std::ios::app);
    if (!journal) throw Error(ErrorCode::IoError, "cannot open journal " + options.journal->string());
    if (fresh) journal << detail::journal_header(params) << '\n' << std::flush;
    if (torn) journal << '\n' << std::flush;
  }
  if (options.cache_dir) std::filesystem::create_directories(*options.cache_dir);

  for (std::size_t r = 0; r < references.size(); ++r) {
    std::vector<std::size_t> pending;
    for (std::size_t t = 0; t < cols; ++t) {
      if (!done[r * cols + t]) pending.push_back(t);
    }
    if (pending.empty()) continue;

    const auto& ref = references[r];
    XaModel model;
    try {
      std::optional<std::filesystem::path> cached;
      if (options.cache_dir) cached = *options.cache_dir / model_cache_name(ref.sequence, params);
      if (cached && std::filesystem::exists(*cached)) {
        model = load_model_file(*cached);
        if (model.params() == params) ++run.models_loaded;
      }
      if (!(model.params() == params)) {
        model = learn(ref.sequence, params);
        ++run.models_learned;
        if (cached) save_model_file(model, *cached);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "reference '" + ref.label + "': " + e.what());
    }

    detail::parallel_for(pending.size(), options.workers, [&](std::size_t i) {
      const std::size_t t = pending[i];
      double value = 0;
      try {
        value = nrc(targets[t].sequence, model);
      } catch (const Error& e) {
        throw Error(e.code(), "cell (" + ref.label + ", " + targets[t].label + "): " + e.what());
      }
      m.values[r * cols + t] = value;
      if (journal.is_open()) {
        std::lock_guard lock(journal_mutex);
        journal << ref.label << ',' << targets[t].label << ',' << detail::format_full(value)
                << '\n'
                << std::flush;
      }
    });
    run.cells_computed += pending.size();
  }
  return run;
}

/// Header row of target labels, leading column of reference labels, 6 decimals.
inline void write_matrix_csv(const SimilarityMatrix& m, std::ostream& out) {
  out << "reference";
  for (const auto& t : m.target_labels) out << ',' << t;
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < m.reference_labels.size(); ++r) {
    out << m.reference_labels[r];
    for (std::size_t t = 0; t < m.target_labels.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.6f", m.at(r, t));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace xafcm

#endif  // XAFCM_MATRIX_HPP
