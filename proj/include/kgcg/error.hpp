#pragma once

#include <stdexcept>
#include <string>

namespace kgcg {

// Pipeline stage an error is attributed to. The CLI maps each to its own exit code.
enum class Stage { usage, ingest, model, metric };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::usage: return "usage";
    case Stage::ingest: return "ingest";
    case Stage::model: return "model";
    case Stage::metric: return "metric";
  }
  return "unknown";
}

inline int exit_code(Stage s) {
  switch (s) {
    case Stage::usage: return 2;
    case Stage::ingest: return 3;
    case Stage::model: return 4;
    case Stage::metric: return 5;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(Stage stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(Stage::usage, what) {}
};

class DumpError : public Error {
 public:
  enum class Kind { file_not_found, unsupported_compression, corrupt_archive, io };

  DumpError(Kind kind, const std::string& what) : Error(Stage::ingest, what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(Stage::ingest, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Stage::usage, what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(Stage::model, what) {}
};

class CycleError : public ModelError {
 public:
  using ModelError::ModelError;
};

class UnknownClassError : public ModelError {
 public:
  using ModelError::ModelError;
};

class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error(Stage::metric, what) {}
};

// ipp() on a class with no instances.
class EmptyClassError : public MetricError {
 public:
  using MetricError::MetricError;
};

}  // namespace kgcg
