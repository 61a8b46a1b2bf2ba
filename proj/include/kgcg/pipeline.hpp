#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "kgcg/adapter.hpp"
#include "kgcg/dump.hpp"
#include "kgcg/error.hpp"
#include "kgcg/instance_stats.hpp"
#include "kgcg/metrics.hpp"
#include "kgcg/ntriples.hpp"
#include "kgcg/ontology.hpp"
#include "kgcg/vocab.hpp"

namespace kgcg {

inline constexpr const char* tool_version = "1.0.0";

/// A dump file, or in-memory N-Triples text (tests, samples).
struct Input {
  std::string name;  // path as given, or a label for inline text
  std::optional<std::string> text;
  Compression compression = Compression::auto_detect;

  static Input file(std::string path, Compression c = Compression::auto_detect) { return Input{std::move(path), std::nullopt, c}; }
  static Input inline_text(std::string label, std::string content) {
    return Input{std::move(label), std::move(content), Compression::none};
  }

  std::unique_ptr<LineSource> open() const {
    if (text) return std::make_unique<StringSource>(*text);
    return open_dump(name, compression);
  }
};

enum class OutputFormat { json, csv, markdown, plain };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "markdown" || s == "md") return OutputFormat::markdown;
  if (s == "plain" || s == "text") return OutputFormat::plain;
  throw UsageError("unknown format '" + std::string(s) + "'");
}

struct RunConfig {
  std::string label;
  std::vector<Input> ontology_inputs;
  std::vector<Input> data_inputs;
  AdapterSpec adapter;
  HierarchyConfig hierarchy;
  bool instance_of_explicit = false;  // else the adapter may supply instance-of IRIs
  MetricConfig metrics;
  Strictness strictness = Strictness::skip_bad_lines;
  Grouping grouping = Grouping::unsorted;
  unsigned workers = 1;
  std::size_t chunk_triples = 1u << 18;

  void validate() const {
    if (data_inputs.empty()) throw UsageError("at least one data input is required");
    if (ontology_inputs.empty() && metrics.predicate_mode == PredicateMode::declared)
      throw UsageError("declared mode needs ontology inputs");
    if (effective_hierarchy().instance_of.empty()) throw UsageError("no instance-of predicate configured");
    if (hierarchy.subclass_of.empty()) throw UsageError("no subclass-of predicate configured");
    if (workers == 0) throw UsageError("workers must be positive");
  }

  HierarchyConfig effective_hierarchy() const {
    HierarchyConfig h = hierarchy;
    if (!instance_of_explicit && !adapter.instance_of.empty()) h.instance_of = adapter.instance_of;
    if (!h.virtual_root) h.virtual_root = adapter.virtual_root();
    return h;
  }
};

struct InputDigest {
  std::string role;  // "ontology" or "data"
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunDiagnostics {
  std::uint64_t lines_read = 0;
  std::uint64_t triples_read = 0;  // data triples after adapter, one pass
  std::uint64_t line_errors = 0;
  std::vector<std::string> first_line_errors;  // "input:line: message", capped
  std::uint64_t adapter_dropped = 0;
  MembershipDiagnostics membership;
  std::vector<CollapsedCycle> collapsed;
};

/// Everything a run produced, still keyed by TermId.
struct PipelineResult {
  std::shared_ptr<TermTable> table;
  OntologyGraph graph;
  MembershipIndex membership;
  ClassPredicateStats stats;
  DatasetResult result;
  RunDiagnostics diagnostics;
  std::vector<InputDigest> digests;
};

namespace detail {

inline std::string sha256_hex(const Input& in, std::uint64_t& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  bytes = 0;
  if (in.text) {
    EVP_DigestUpdate(ctx.get(), in.text->data(), in.text->size());
    bytes = in.text->size();
  } else {
    std::ifstream f(in.name, std::ios::binary);
    if (!f) throw DumpError(DumpError::Kind::file_not_found, "cannot open: " + in.name);
    std::vector<char> buf(1 << 16);
    while (f.read(buf.data(), static_cast<std::streamsize>(buf.size())) || f.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(f.gcount()));
      bytes += static_cast<std::uint64_t>(f.gcount());
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

/// Streams every input through the parser and adapter, in order, handing
/// triples to `sink`. The adapter's end-of-stream triples follow when
/// `with_finish` is set.
template <typename Sink>
void stream_inputs(const std::vector<Input>& inputs, const RunConfig& config, TermTable& table,
                   const Vocabulary& vocab, RunDiagnostics* diag, bool with_finish, Sink&& sink) {
  Adapter adapter(config.adapter, table, vocab);
  for (const auto& in : inputs) {
    auto source = in.open();
    NTriplesReader reader(*source, table, config.strictness);
    try {
      reader.for_each(
          [&](const Triple& t) {
            if (auto out = adapter.apply(t)) {
              if (diag) ++diag->triples_read;
              sink(*out);
            }
          },
          [&](const LineError& e) {
            if (!diag) return;
            ++diag->line_errors;
            if (diag->first_line_errors.size() < 20)
              diag->first_line_errors.push_back(in.name + ":" + std::to_string(e.line) + ": " + e.message);
          });
    } catch (const ParseError& e) {
      throw ParseError(e.line(), in.name + ": " + e.what());
    }
    if (diag) diag->lines_read += reader.counts().lines;
  }
  if (diag) diag->adapter_dropped += adapter.dropped();
  if (with_finish)
    for (const Triple& t : adapter.finish()) sink(t);
}

inline std::size_t shard_of(TermId subject, unsigned workers) {
  return std::hash<std::uint32_t>{}(subject.value * 0x9E3779B1u) % workers;
}

/// Buffers triples into fixed-size chunks and lets each worker handle the
/// subjects of its shard. Workers own disjoint subjects, so per-worker
/// state needs no locking.
template <typename Work>
class ShardedDispatcher {
 public:
  ShardedDispatcher(unsigned workers, std::size_t chunk, Work& work) : workers_(workers), chunk_(chunk), work_(work) {
    buffer_.reserve(chunk_);
  }
  void push(const Triple& t) {
    buffer_.push_back(t);
    if (buffer_.size() >= chunk_) flush();
  }
  void flush() {
    if (buffer_.empty()) return;
    if (workers_ == 1) {
      for (const Triple& t : buffer_) work_(0, t);
    } else {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers_; ++w)
        threads.emplace_back([this, w] {
          for (const Triple& t : buffer_)
            if (shard_of(t.subject, workers_) == w) work_(w, t);
        });
    }
    buffer_.clear();
  }

 private:
  unsigned workers_;
  std::size_t chunk_;
  Work& work_;
  std::vector<Triple> buffer_;
};

}  // namespace detail

/// Ontology pass, then pass 1 (types) and pass 2 (predicates) over the data.
inline PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  PipelineResult out;
  out.table = std::make_shared<TermTable>();
  TermTable& table = *out.table;
  const HierarchyConfig hier = config.effective_hierarchy();
  const Vocabulary vocab = resolve_vocabulary(hier, table);
  auto& diag = out.diagnostics;

  for (const auto& in : config.ontology_inputs) {
    InputDigest d{"ontology", in.name, {}, 0};
    d.sha256 = detail::sha256_hex(in, d.bytes);
    out.digests.push_back(std::move(d));
  }
  for (const auto& in : config.data_inputs) {
    InputDigest d{"data", in.name, {}, 0};
    d.sha256 = detail::sha256_hex(in, d.bytes);
    out.digests.push_back(std::move(d));
  }

  // Schema. Without ontology inputs the classes come from the data itself.
  {
    std::optional<TermId> root, vroot;
    if (hier.root) root = table.intern(iri_token(*hier.root));
    if (hier.virtual_root) vroot = table.intern(iri_token(*hier.virtual_root));
    OntologyBuilder builder(vocab, table);
    const auto& schema_inputs = config.ontology_inputs.empty() ? config.data_inputs : config.ontology_inputs;
    RunDiagnostics schema_diag;
    detail::stream_inputs(schema_inputs, config, table, vocab, config.ontology_inputs.empty() ? nullptr : &schema_diag,
                          true, [&](const Triple& t) { builder.add(t); });
    out.graph = builder.build(hier.cycle_policy, root, vroot);
    diag.collapsed = out.graph.collapsed_cycles();
    diag.line_errors += schema_diag.line_errors;
    diag.first_line_errors = schema_diag.first_line_errors;
    diag.adapter_dropped += schema_diag.adapter_dropped;
  }

  // Pass 1: direct types.
  {
    std::vector<MembershipBuilder> builders;
    for (unsigned w = 0; w < config.workers; ++w) builders.emplace_back(out.graph, vocab);
    auto work = [&](unsigned w, const Triple& t) { builders[w].add(t); };
    detail::ShardedDispatcher dispatch(config.workers, config.chunk_triples, work);
    detail::stream_inputs(config.data_inputs, config, table, vocab, &diag, false,
                          [&](const Triple& t) { dispatch.push(t); });
    dispatch.flush();
    for (unsigned w = 1; w < config.workers; ++w) builders[0].merge(std::move(builders[w]));
    out.membership = std::move(builders[0]).build();
    diag.membership = out.membership.diagnostics();
  }

  // Pass 2: predicate usage.
  {
    std::vector<PredicateStatsBuilder> builders;
    for (unsigned w = 0; w < config.workers; ++w) builders.emplace_back(out.graph, out.membership, vocab, config.grouping);
    auto work = [&](unsigned w, const Triple& t) { builders[w].add(t); };
    detail::ShardedDispatcher dispatch(config.workers, config.chunk_triples, work);
    detail::stream_inputs(config.data_inputs, config, table, vocab, nullptr, false,
                          [&](const Triple& t) { dispatch.push(t); });
    dispatch.flush();
    out.stats = std::move(builders[0]).finish();
    for (unsigned w = 1; w < config.workers; ++w) out.stats.merge(std::move(builders[w]).finish());
  }

  out.result = class_granularity(out.graph, out.membership, out.stats, table, config.metrics);
  return out;
}

}  // namespace kgcg
