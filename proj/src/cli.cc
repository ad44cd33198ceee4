// Copyright 2026 The VDR Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vdr/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vdr/analysis.hpp"
#include "vdr/corpus_io.hpp"
#include "vdr/coverage.hpp"
#include "vdr/evaluation.hpp"
#include "vdr/index_search.hpp"
#include "vdr/scoring.hpp"
#include "vdr/stats.hpp"
#include "vdr/synth.hpp"

namespace vdr::cli {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fixed(double value, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void write_json_lines(const fs::path& path, const std::vector<nlohmann::json>& lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& line : lines) out << line.dump() << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

PoolMode pool_mode_from_string(const std::string& s) {
  if (s == "mean") return PoolMode::kMean;
  if (s == "first") return PoolMode::kFirst;
  throw ArgumentError("unknown pool mode '" + s + "' (expected mean|first)");
}

// Flags shared by subcommands that score documents.
struct ScoringFlags {
  std::string mode = "maxsim";
  std::string mask = "all";
  std::string pool = "mean";
  bool stm_without_prompt = false;
  bool near_match = false;

  void add_to(CLI::App* app, bool with_mask = true) {
    app->add_option("--mode", mode, "Scoring: pooled|maxsim")->capture_default_str();
    if (with_mask) {
      app->add_option("--mask", mask, "Token mask: all|stm|qtm|qtm-lex|qtm-nonlex")
          ->capture_default_str();
    }
    app->add_option("--pool", pool, "Pooling for pooled mode: mean|first")->capture_default_str();
    app->add_flag("--stm-without-prompt", stm_without_prompt,
                  "Count only pad tokens as special-token matching");
    app->add_flag("--near-match", near_match,
                  "Lexical masks also accept OCR tokens within edit distance 1");
  }

  ScoreMode score_mode() const {
    ScoreMode m{score_kind_from_string(mode), mask_from_string(mask)};
    m.validate();
    return m;
  }

  SearchOptions search_options(std::size_t workers) const {
    SearchOptions options;
    options.pool_mode = pool_mode_from_string(pool);
    options.mask_options.stm_includes_prompt = !stm_without_prompt;
    options.mask_options.lexical_match = near_match ? LexicalMatch::kNear : LexicalMatch::kExact;
    options.workers = workers;
    return options;
  }
};

std::vector<MultiVectorEmbedding> load_queries(const std::string& path, const std::string& tokens) {
  return entries_of(load_corpus(path, optional_path(tokens)));
}

// ---- index ---------------------------------------------------------------

struct IndexCmd {
  std::string corpus, tokens, pooled_out, pool = "mean";

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("index", "Validate a corpus file and compute pooled vectors");
    app->add_option("--corpus", corpus, "Embedding file")->required();
    app->add_option("--tokens", tokens, "Token metadata sidecar (JSONL)");
    app->add_option("--pooled-out", pooled_out, "Write one pooled row per record to this file");
    app->add_option("--pool", pool, "mean|first")->capture_default_str();
  }

  int exec(std::ostream& out) const {
    const auto c = load_corpus(corpus, optional_path(tokens));
    std::size_t rows = 0, with_grid = 0, with_tokens = 0;
    for (const auto& e : c.shared_entries()) {
      rows += e->rows();
      with_grid += e->grid() ? 1 : 0;
      with_tokens += e->has_tokens() ? 1 : 0;
    }
    nlohmann::json summary = {{"records", c.size()},   {"dim", c.dim()},
                              {"rows", rows},          {"with_grid", with_grid},
                              {"with_tokens", with_tokens}};
    out << summary.dump() << '\n';
    if (!pooled_out.empty()) {
      const auto mode = pool_mode_from_string(pool);
      std::vector<MultiVectorEmbedding> pooled;
      pooled.reserve(c.size());
      for (const auto& e : c.shared_entries()) pooled.emplace_back(e->id(), c.dim(), vdr::pool(*e, mode));
      write_embeddings(pooled, c.dim(), pooled_out);
    }
    return kOk;
  }
};

// ---- search --------------------------------------------------------------

struct SearchCmd {
  std::string corpus, queries, query_tokens, ocr, output, tag = "vdr";
  std::size_t k = 100;
  std::size_t workers = 1;
  ScoringFlags scoring;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("search", "Rank the corpus for every query and write a run file");
    app->add_option("--corpus", corpus, "Document embedding file")->required();
    app->add_option("--queries", queries, "Query embedding file")->required();
    app->add_option("--query-tokens", query_tokens, "Query token sidecar (JSONL)");
    app->add_option("--ocr", ocr, "OCR pages (JSONL); required by lexical masks");
    app->add_option("--out", output, "Run file to write")->required();
    app->add_option("--k", k, "Hits per query")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--tag", tag, "Run tag column")->capture_default_str();
    scoring.add_to(app);
  }

  int exec(std::ostream& out) const {
    const auto mode = scoring.score_mode();
    const auto c = load_corpus(corpus);
    const auto qs = load_queries(queries, query_tokens);
    std::optional<OcrIndex> ocr_index;
    if (!ocr.empty()) ocr_index = build_ocr_index(load_ocr_pages(ocr));
    const auto rankings = batch_search(c, qs, mode, k, ocr_index ? &*ocr_index : nullptr,
                                       scoring.search_options(workers));
    write_run_file(output, rankings, tag);
    std::size_t empty_masks = 0;
    for (const auto& r : rankings) empty_masks += r.empty_mask_docs;
    out << "searched " << qs.size() << " queries over " << c.size() << " documents ("
        << to_string(mode.kind) << ", mask " << to_string(mode.mask) << ") -> " << output << '\n';
    if (empty_masks > 0) {
      out << "warning: " << empty_masks << " (query, document) pairs had no active tokens\n";
    }
    return kOk;
  }
};

// ---- evaluate ------------------------------------------------------------

struct EvaluateCmd {
  std::string run, qrels, output;
  std::size_t k = 5;
  std::size_t recall_k = 1;
  std::optional<double> tau;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("evaluate", "nDCG@k and recall@k of a run file");
    app->add_option("--run", run, "Run file")->required();
    app->add_option("--qrels", qrels, "Qrels file")->required();
    app->add_option("--k", k, "nDCG cutoff")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--recall-k", recall_k, "Recall cutoff")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--tau", tau,
                    "Also report the contrastive loss of the best relevant hit against the "
                    "hardest non-relevant hit at this temperature");
    app->add_option("--out", output, "Report (JSONL)");
  }

  int exec(std::ostream& out) const {
    if (tau && !(*tau > 0.0)) throw ArgumentError("--tau must be > 0");
    const auto rankings = read_run_file(run);
    const auto judgments = load_qrels(qrels);
    const auto report = evaluate(rankings, judgments, k, recall_k);
    auto lines = to_json_lines(report);
    if (tau) {
      double total = 0.0;
      std::size_t counted = 0;
      for (std::size_t i = 0; i < rankings.size(); ++i) {
        const auto& judged = judgments.at(rankings[i].query_id);
        std::optional<double> positive;
        std::vector<double> negatives;
        for (const auto& hit : rankings[i].hits) {
          auto it = judged.find(hit.doc_id);
          if (it != judged.end() && it->second > 0) {
            positive = std::max(positive.value_or(hit.score), hit.score);
          } else {
            negatives.push_back(hit.score);
          }
        }
        if (positive && !negatives.empty()) {
          const double loss = contrastive_loss(*positive, negatives, *tau);
          lines[i]["contrastive_loss"] = loss;
          total += loss;
          ++counted;
        } else {
          lines[i]["contrastive_loss"] = nullptr;
        }
      }
      lines.back()["summary"]["tau"] = *tau;
      lines.back()["summary"]["mean_contrastive_loss"] =
          counted ? nlohmann::json(total / static_cast<double>(counted)) : nlohmann::json(nullptr);
    }
    if (!output.empty()) write_json_lines(output, lines);
    out << "queries " << report.per_query.size() << '\n';
    out << "nDCG@" << k << " = " << fixed(report.mean_ndcg) << '\n';
    out << "recall@" << recall_k << " = " << fixed(report.mean_recall) << '\n';
    return kOk;
  }
};

// ---- bench ---------------------------------------------------------------

struct BenchCmd {
  std::string corpus, distractors, queries, query_tokens, qrels, sizes, output;
  std::size_t workers = 1;
  std::size_t k = 5;
  ScoringFlags scoring;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("bench", "Latency and nDCG@5 as distractors grow the index");
    app->add_option("--corpus", corpus, "Base corpus (holds every relevant document)")->required();
    app->add_option("--distractors", distractors, "Distractor embedding file")->required();
    app->add_option("--queries", queries, "Query embedding file")->required();
    app->add_option("--query-tokens", query_tokens, "Query token sidecar (JSONL)");
    app->add_option("--qrels", qrels, "Qrels file")->required();
    app->add_option("--sizes", sizes, "Comma-separated ascending corpus sizes")->required();
    app->add_option("--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--k", k, "Hits per query")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", output, "LatencyReports (JSONL)");
    scoring.add_to(app, false);
  }

  int exec(std::ostream& out) const {
    std::vector<std::size_t> size_list;
    for (const auto& s : split_list(sizes)) {
      try {
        size_list.push_back(std::stoull(s));
      } catch (const std::logic_error&) {
        throw ArgumentError("bad corpus size '" + s + "'");
      }
    }
    const auto mode = scoring.score_mode();
    const auto base = load_corpus(corpus);
    const auto extra = load_corpus(distractors);
    const auto qs = load_queries(queries, query_tokens);
    BenchOptions options;
    options.workers = workers;
    options.k = k;
    options.search = scoring.search_options(workers);
    const auto reports = bench_scaling(size_list, base, extra, qs, load_qrels(qrels), mode, options);
    std::vector<nlohmann::json> lines;
    out << "size\tmean_ms\tp50_ms\tp95_ms\tndcg@5\n";
    for (const auto& r : reports) {
      lines.push_back(to_json(r));
      out << r.corpus_size << '\t' << fixed(r.mean * 1e3, 3) << '\t' << fixed(r.p50 * 1e3, 3)
          << '\t' << fixed(r.p95 * 1e3, 3) << '\t' << fixed(r.ndcg_at_5) << '\n';
    }
    if (!output.empty()) write_json_lines(output, lines);
    return kOk;
  }
};

// ---- analyze features ----------------------------------------------------

struct FeaturesCmd {
  std::string manifest, dataset = "dataset", run, qrels, ocr, images, output, features_out, tsv;
  int bg_threshold = 250;
  std::string alternative = "a_greater";

  void add(CLI::App* parent) {
    auto* app = parent->add_subcommand(
        "features", "Coverage metrics and retrieved-vs-missed significance tests");
    app->add_option("--manifest", manifest,
                    "JSONL of {\"dataset\",\"run\",\"qrels\",\"ocr\",\"images\"}; replaces the "
                    "single-dataset flags");
    app->add_option("--dataset", dataset, "Dataset label")->capture_default_str();
    app->add_option("--run", run, "Run file");
    app->add_option("--qrels", qrels, "Qrels file");
    app->add_option("--ocr", ocr, "OCR pages (JSONL)");
    app->add_option("--images", images, "Directory of <doc_id>.pgm page renderings");
    app->add_option("--bg-threshold", bg_threshold, "Background luminance threshold")
        ->capture_default_str()
        ->check(CLI::Range(0, 255));
    app->add_option("--alternative", alternative, "a_greater|two_sided")->capture_default_str();
    app->add_option("--out", output, "Significance matrix (JSONL)");
    app->add_option("--features-out", features_out, "Per-document features (JSONL)");
    app->add_option("--tsv", tsv, "Significance matrix as TSV");
  }

  struct Entry {
    std::string dataset, run, qrels, ocr, images;
  };

  std::vector<Entry> entries() const {
    std::vector<Entry> list;
    if (!manifest.empty()) {
      std::ifstream in(manifest);
      if (!in) throw IoError("cannot open '" + manifest + "' for reading");
      std::string line;
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
          const auto obj = nlohmann::json::parse(line);
          list.push_back({obj.at("dataset"), obj.at("run"), obj.at("qrels"), obj.at("ocr"),
                          obj.at("images")});
        } catch (const nlohmann::json::exception& e) {
          throw DataError(manifest + ": " + e.what());
        }
      }
      return list;
    }
    if (run.empty() || qrels.empty() || ocr.empty() || images.empty()) {
      throw ArgumentError("analyze features needs --manifest or all of --run --qrels --ocr --images");
    }
    list.push_back({dataset, run, qrels, ocr, images});
    return list;
  }

  int exec(std::ostream& out) const {
    const auto alt = alternative_from_string(alternative);
    std::vector<DatasetSplit> splits;
    std::vector<nlohmann::json> feature_lines;
    for (const auto& entry : entries()) {
      std::map<std::string, VisualFeatures> features;
      for (const auto& page : load_ocr_pages(entry.ocr)) {
        const auto image = read_pgm(fs::path(entry.images) / (page.doc_id + ".pgm"));
        const auto f = coverage(page, background_mask(image, static_cast<std::uint8_t>(bg_threshold)));
        features[page.doc_id] = f;
        feature_lines.push_back({{"dataset", entry.dataset},
                                 {"doc_id", page.doc_id},
                                 {"c_text", f.c_text},
                                 {"c_nontext", f.c_nontext},
                                 {"c_background", f.c_background},
                                 {"token_count", f.token_count}});
      }
      const auto rankings = read_run_file(entry.run);
      splits.push_back({entry.dataset, split_by_top1(rankings, load_qrels(entry.qrels), features)});
    }
    const auto matrix = feature_significance(splits, kAllFeatures, alt);
    if (!output.empty()) write_json_lines(output, to_json_lines(matrix));
    if (!features_out.empty()) write_json_lines(features_out, feature_lines);
    const auto table = to_tsv(matrix);
    if (!tsv.empty()) write_text(tsv, table);
    for (const auto& s : splits) {
      out << s.dataset << ": group A " << s.split.group_a.size() << ", group B "
          << s.split.group_b.size() << '\n';
    }
    out << table;
    return kOk;
  }
};

// ---- analyze matching ----------------------------------------------------

struct MatchingCmd {
  std::string corpus, queries, query_tokens, qrels, ocr, modes = "all,stm,qtm", output, tsv;
  std::size_t workers = 1;
  bool stm_without_prompt = false;
  bool near_match = false;

  void add(CLI::App* parent) {
    auto* app = parent->add_subcommand("matching", "nDCG@5 with one token category active at a time");
    app->add_option("--corpus", corpus, "Document embedding file")->required();
    app->add_option("--queries", queries, "Query embedding file")->required();
    app->add_option("--query-tokens", query_tokens, "Query token sidecar (JSONL)")->required();
    app->add_option("--qrels", qrels, "Qrels file")->required();
    app->add_option("--ocr", ocr, "OCR pages (JSONL); needed for qtm-lex/qtm-nonlex");
    app->add_option("--modes", modes, "Comma-separated masks")->capture_default_str();
    app->add_option("--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", output, "Ablation table (JSONL)");
    app->add_option("--tsv", tsv, "Ablation table as TSV");
    app->add_flag("--stm-without-prompt", stm_without_prompt,
                  "Count only pad tokens as special-token matching");
    app->add_flag("--near-match", near_match,
                  "Lexical masks also accept OCR tokens within edit distance 1");
  }

  int exec(std::ostream& out) const {
    std::vector<MaskKind> masks;
    for (const auto& m : split_list(modes)) masks.push_back(mask_from_string(m));
    if (masks.empty()) throw ArgumentError("--modes is empty");
    const auto c = load_corpus(corpus);
    const auto qs = load_queries(queries, query_tokens);
    std::optional<OcrIndex> ocr_index;
    if (!ocr.empty()) ocr_index = build_ocr_index(load_ocr_pages(ocr));
    AblationOptions options;
    options.workers = workers;
    options.mask_options.stm_includes_prompt = !stm_without_prompt;
    options.mask_options.lexical_match = near_match ? LexicalMatch::kNear : LexicalMatch::kExact;
    const auto table = matching_ablation(c, qs, load_qrels(qrels), ocr_index ? &*ocr_index : nullptr,
                                         masks, options);
    if (!output.empty()) write_json_lines(output, to_json_lines(table));
    const auto text = to_tsv(table);
    if (!tsv.empty()) write_text(tsv, text);
    out << text;
    out << "partition check over " << table.pairs_checked
        << " pairs: max |all - (stm + qtm)| = " << table.max_kind_residual;
    if (table.max_lexical_residual) {
      out << ", max |qtm - (lex + nonlex)| = " << *table.max_lexical_residual;
    }
    out << '\n';
    return kOk;
  }
};

// ---- simmap --------------------------------------------------------------

struct SimmapCmd {
  std::string corpus, queries, query_tokens, query_id, doc_id, output;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("simmap", "Export per-token similarity over the patch grid");
    app->add_option("--corpus", corpus, "Document embedding file")->required();
    app->add_option("--queries", queries, "Query embedding file")->required();
    app->add_option("--query-tokens", query_tokens, "Query token sidecar (JSONL)");
    app->add_option("--query-id", query_id, "Query id")->required();
    app->add_option("--doc-id", doc_id, "Document id")->required();
    app->add_option("--out", output, "Output (JSONL)")->required();
  }

  int exec(std::ostream& out) const {
    const auto c = load_corpus(corpus);
    const auto qs = load_corpus(queries, optional_path(query_tokens));
    const auto& query = qs.by_id(query_id);
    const auto& doc = c.by_id(doc_id);
    export_simmap(query, doc, fs::path(output));
    out << "wrote " << query.rows() << " token rows for (" << query_id << ", " << doc_id
        << "), maxsim = " << score_maxsim(query, doc).value << '\n';
    return kOk;
  }
};

// ---- synth ---------------------------------------------------------------

struct SynthCmd {
  std::string out_dir;
  SynthSpec spec;
  std::size_t distractors = 0;
  bool no_special_patches = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("synth", "Generate a deterministic synthetic fixture");
    app->add_option("--out-dir", out_dir, "Output directory")->required();
    app->add_option("--seed", spec.seed, "PRNG seed")->capture_default_str();
    app->add_option("--num-docs", spec.num_docs)->capture_default_str();
    app->add_option("--num-queries", spec.num_queries)->capture_default_str();
    app->add_option("--grid-rows", spec.grid_rows)->capture_default_str();
    app->add_option("--grid-cols", spec.grid_cols)->capture_default_str();
    app->add_option("--min-text-tokens", spec.min_text_tokens)->capture_default_str();
    app->add_option("--max-text-tokens", spec.max_text_tokens)->capture_default_str();
    app->add_option("--pad-tokens", spec.pad_tokens)->capture_default_str();
    app->add_option("--prompt-tokens", spec.prompt_tokens)->capture_default_str();
    app->add_option("--dim", spec.dim)->capture_default_str();
    app->add_option("--planted", spec.planted_relevance,
                    "Fraction of query text tokens copied into the relevant document")
        ->capture_default_str();
    app->add_option("--noise", spec.noise, "Noise on planted copies")->capture_default_str();
    app->add_flag("--adversarial", spec.adversarial,
                  "Fill relevant documents with the antipode of the query mean");
    app->add_flag("--no-special-patches", no_special_patches,
                  "Do not embed the shared pad/prompt vectors in every document");
    app->add_option("--distractors", distractors, "Also write N distractor documents")
        ->capture_default_str();
  }

  int exec(std::ostream& out) {
    spec.special_patches = !no_special_patches;
    const auto data = generate(spec);
    write_synth(data, out_dir);
    if (distractors > 0) {
      write_corpus(generate_distractors(spec, distractors), fs::path(out_dir) / "distractors.vdre");
    }
    out << "wrote " << data.corpus.size() << " documents, " << data.queries.size() << " queries";
    if (distractors > 0) out << ", " << distractors << " distractors";
    out << " to " << out_dir << '\n';
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Late-interaction visual document retrieval engine", "vdr"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values")->check(CLI::ExistingFile);
  app.allow_config_extras(false);

  IndexCmd index_cmd;
  SearchCmd search_cmd;
  EvaluateCmd evaluate_cmd;
  BenchCmd bench_cmd;
  FeaturesCmd features_cmd;
  MatchingCmd matching_cmd;
  SimmapCmd simmap_cmd;
  SynthCmd synth_cmd;
  index_cmd.add(app);
  search_cmd.add(app);
  evaluate_cmd.add(app);
  bench_cmd.add(app);
  auto* analyze = app.add_subcommand("analyze", "Attribution and visual-feature analyses");
  analyze->require_subcommand(1);
  features_cmd.add(analyze);
  matching_cmd.add(analyze);
  simmap_cmd.add(app);
  synth_cmd.add(app);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    const CLI::App* deepest = &app;
    while (!deepest->get_subcommands().empty()) deepest = deepest->get_subcommands().front();
    err << deepest->help();
    return kUsageError;
  }

  try {
    if (app.got_subcommand("index")) return index_cmd.exec(out);
    if (app.got_subcommand("search")) return search_cmd.exec(out);
    if (app.got_subcommand("evaluate")) return evaluate_cmd.exec(out);
    if (app.got_subcommand("bench")) return bench_cmd.exec(out);
    if (app.got_subcommand("simmap")) return simmap_cmd.exec(out);
    if (app.got_subcommand("synth")) return synth_cmd.exec(out);
    if (analyze->got_subcommand("features")) return features_cmd.exec(out);
    if (analyze->got_subcommand("matching")) return matching_cmd.exec(out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  err << app.help();
  return kUsageError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace vdr::cli
