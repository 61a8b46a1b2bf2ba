#pragma once

#include <boost/iostreams/device/file.hpp>
#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filter/zlib.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <string>

#include "kgcg/error.hpp"

namespace kgcg {

enum class Compression { none, gzip, bzip2, auto_detect };

inline Compression parse_compression(std::string_view name) {
  if (name == "none") return Compression::none;
  if (name == "gzip" || name == "gz") return Compression::gzip;
  if (name == "bzip2" || name == "bz2") return Compression::bzip2;
  if (name == "auto") return Compression::auto_detect;
  throw DumpError(DumpError::Kind::unsupported_compression,
                  "unsupported compression '" + std::string(name) + "'");
}

/// Sequential line producer. Lines are returned without the terminator;
/// a trailing CR is stripped.
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool getline(std::string& line) = 0;
};

class StringSource final : public LineSource {
 public:
  explicit StringSource(std::string text) : in_(std::move(text)) {}
  bool getline(std::string& line) override {
    if (!std::getline(in_, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

 private:
  std::istringstream in_;
};

/// A (possibly decompressed) dump file. Decoder failures surface as
/// DumpError{corrupt_archive} from getline()/read_all().
class DumpStream final : public LineSource {
 public:
  DumpStream(const std::filesystem::path& path, Compression compression) : path_(path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
      throw DumpError(DumpError::Kind::file_not_found, "no such file: " + path.string());
    file_.rdbuf()->pubsetbuf(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    file_.open(path, std::ios::binary);
    if (!file_) throw DumpError(DumpError::Kind::file_not_found, "cannot open: " + path.string());
    if (compression == Compression::auto_detect) compression = sniff();
    compression_ = compression;
    if (compression_ == Compression::none) {
      in_ = &file_;
      return;
    }
    filtered_ = std::make_unique<boost::iostreams::filtering_istream>();
    if (compression_ == Compression::gzip)
      filtered_->push(boost::iostreams::gzip_decompressor());
    else
      filtered_->push(boost::iostreams::bzip2_decompressor());
    filtered_->push(file_);
    filtered_->exceptions(std::ios::badbit);
    in_ = filtered_.get();
  }

  DumpStream(const DumpStream&) = delete;
  DumpStream& operator=(const DumpStream&) = delete;

  Compression compression() const { return compression_; }
  const std::filesystem::path& path() const { return path_; }

  bool getline(std::string& line) override {
    try {
      if (!std::getline(*in_, line)) {
        check_clean_end();
        return false;
      }
    } catch (const DumpError&) {
      throw;
    } catch (const std::exception& e) {
      throw corrupt(e.what());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string read_all() {
    std::string out;
    try {
      std::array<char, 1 << 16> chunk{};
      while (in_->read(chunk.data(), chunk.size()) || in_->gcount() > 0)
        out.append(chunk.data(), static_cast<std::size_t>(in_->gcount()));
      check_clean_end();
    } catch (const DumpError&) {
      throw;
    } catch (const std::exception& e) {
      throw corrupt(e.what());
    }
    return out;
  }

 private:
  Compression sniff() {
    std::array<unsigned char, 3> magic{};
    file_.read(reinterpret_cast<char*>(magic.data()), magic.size());
    const auto got = file_.gcount();
    file_.clear();
    file_.seekg(0);
    if (got >= 2 && magic[0] == 0x1f && magic[1] == 0x8b) return Compression::gzip;
    if (got >= 3 && magic[0] == 'B' && magic[1] == 'Z' && magic[2] == 'h') return Compression::bzip2;
    return Compression::none;
  }

  // Truncated archives surface as a decoder exception or badbit.
  void check_clean_end() {
    if (in_->bad()) throw corrupt("stream error");
  }

  DumpError corrupt(const std::string& why) const {
    return DumpError(DumpError::Kind::corrupt_archive, "corrupt archive " + path_.string() + ": " + why);
  }

  std::filesystem::path path_;
  std::array<char, 1 << 16> buffer_{};
  std::ifstream file_;
  std::unique_ptr<boost::iostreams::filtering_istream> filtered_;
  std::istream* in_ = nullptr;
  Compression compression_ = Compression::none;
};

inline std::unique_ptr<DumpStream> open_dump(const std::filesystem::path& path,
                                             Compression compression = Compression::auto_detect) {
  return std::make_unique<DumpStream>(path, compression);
}

}  // namespace kgcg
