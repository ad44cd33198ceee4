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

#include "vdr/corpus_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vdr/errors.hpp"

namespace vdr {

namespace {

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open '" + path.string() + "' for reading");
  }

  std::uint64_t offset() const { return offset_; }

  void bytes(void* dst, std::size_t len, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in_.gcount()) != len) {
      std::ostringstream msg;
      msg << path_.string() << ": truncated " << what << " at byte offset " << offset_;
      throw FormatError(msg.str());
    }
    offset_ += len;
  }

  template <typename T>
  T uint(const char* what) {
    unsigned char buf[sizeof(T)];
    bytes(buf, sizeof(T), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
    return value;
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

template <typename T>
void put_uint(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

std::string format_error(const std::filesystem::path& path, std::uint64_t offset,
                         const std::string& what) {
  std::ostringstream msg;
  msg << path.string() << ": " << what << " at byte offset " << offset;
  return msg.str();
}

}  // namespace

float half_to_float(std::uint16_t bits) {
  const std::uint32_t sign = static_cast<std::uint32_t>(bits & 0x8000u) << 16;
  std::uint32_t exponent = (bits >> 10) & 0x1fu;
  std::uint32_t mantissa = bits & 0x3ffu;
  std::uint32_t out;
  if (exponent == 0) {
    if (mantissa == 0) {
      out = sign;
    } else {
      // subnormal: shift until the implicit bit appears
      exponent = 127 - 15 + 1;
      while ((mantissa & 0x400u) == 0) {
        mantissa <<= 1;
        --exponent;
      }
      mantissa &= 0x3ffu;
      out = sign | (exponent << 23) | (mantissa << 13);
    }
  } else if (exponent == 0x1f) {
    out = sign | 0x7f800000u | (mantissa << 13);
  } else {
    out = sign | ((exponent + 127 - 15) << 23) | (mantissa << 13);
  }
  return std::bit_cast<float>(out);
}

std::uint16_t float_to_half(float value) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000u);
  const std::uint32_t abs = bits & 0x7fffffffu;
  if (abs >= 0x7f800000u) {
    return sign | 0x7c00u | (abs > 0x7f800000u ? 0x200u : 0u);
  }
  if (abs >= 0x477ff000u) return sign | 0x7c00u;  // overflow to inf
  if (abs < 0x38800000u) {
    // subnormal or zero in half precision
    if (abs < 0x33000000u) return sign;
    const std::uint32_t exponent = abs >> 23;
    const std::uint32_t mantissa = (abs & 0x7fffffu) | 0x800000u;
    // value / 2^-24 == mantissa * 2^(exponent - 126)
    const std::uint32_t s = 126 - exponent;
    std::uint32_t result = mantissa >> s;
    const std::uint32_t rem = mantissa & ((1u << s) - 1);
    const std::uint32_t halfway = 1u << (s - 1);
    if (rem > halfway || (rem == halfway && (result & 1u))) ++result;
    return sign | static_cast<std::uint16_t>(result);
  }
  std::uint32_t result = ((abs >> 13) - ((127 - 15) << 10));
  const std::uint32_t rem = abs & 0x1fffu;
  if (rem > 0x1000u || (rem == 0x1000u && (result & 1u))) ++result;
  return sign | static_cast<std::uint16_t>(result);
}

Corpus load_corpus(const std::filesystem::path& path,
                   const std::optional<std::filesystem::path>& token_sidecar) {
  Reader in(path);
  char magic[4];
  in.bytes(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(format_error(path, 0, "bad magic (expected \"VDRE\")"));
  }
  const auto version_offset = in.offset();
  const auto version = in.uint<std::uint16_t>("version");
  if (version != kFormatVersion) {
    throw FormatError(format_error(path, version_offset,
                                   "unsupported version " + std::to_string(version)));
  }
  const auto dtype_offset = in.offset();
  const auto dtype = in.uint<std::uint8_t>("dtype");
  if (dtype > 1) {
    throw FormatError(format_error(path, dtype_offset, "unknown dtype " + std::to_string(dtype)));
  }
  const auto dim_offset = in.offset();
  const auto dim = in.uint<std::uint32_t>("dim");
  if (dim == 0) throw FormatError(format_error(path, dim_offset, "dimension 0"));
  const auto count = in.uint<std::uint64_t>("record count");

  std::vector<MultiVectorEmbedding> entries;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto id_len = in.uint<std::uint16_t>("id length");
    std::string id(id_len, '\0');
    in.bytes(id.data(), id_len, "id");
    const auto n_offset = in.offset();
    const auto n = in.uint<std::uint32_t>("row count");
    if (n == 0) {
      throw FormatError(format_error(path, n_offset, "record '" + id + "' has 0 rows"));
    }
    const auto grid_rows = in.uint<std::uint32_t>("grid rows");
    const auto grid_cols = in.uint<std::uint32_t>("grid cols");
    std::optional<Grid> grid;
    if (grid_rows != 0 || grid_cols != 0) grid = Grid{grid_rows, grid_cols};

    const std::size_t total = static_cast<std::size_t>(n) * dim;
    std::vector<float> values(total);
    if (dtype == static_cast<std::uint8_t>(DType::kFloat32)) {
      std::vector<unsigned char> raw(total * 4);
      in.bytes(raw.data(), raw.size(), "float32 payload");
      for (std::size_t i = 0; i < total; ++i) {
        std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * i]) |
                             static_cast<std::uint32_t>(raw[4 * i + 1]) << 8 |
                             static_cast<std::uint32_t>(raw[4 * i + 2]) << 16 |
                             static_cast<std::uint32_t>(raw[4 * i + 3]) << 24;
        values[i] = std::bit_cast<float>(bits);
      }
    } else {
      std::vector<unsigned char> raw(total * 2);
      in.bytes(raw.data(), raw.size(), "float16 payload");
      for (std::size_t i = 0; i < total; ++i) {
        values[i] = half_to_float(static_cast<std::uint16_t>(raw[2 * i] | raw[2 * i + 1] << 8));
      }
    }
    entries.emplace_back(std::move(id), dim, std::move(values), grid);
  }
  if (!in.at_end()) {
    throw FormatError(format_error(path, in.offset(), "trailing bytes after last record"));
  }

  if (token_sidecar) {
    auto table = read_token_sidecar(*token_sidecar);
    for (auto& entry : entries) {
      auto it = table.find(entry.id());
      if (it == table.end()) continue;
      entry.set_tokens(std::move(it->second));
      table.erase(it);
    }
    if (!table.empty()) {
      throw DataError(token_sidecar->string() + ": token entry for unknown record '" +
                      table.begin()->first + "'");
    }
  }
  return Corpus::build(dim, std::move(entries));
}

void write_embeddings(const std::vector<MultiVectorEmbedding>& entries, std::size_t dim,
                      const std::filesystem::path& path, DType dtype) {
  std::string out;
  out.append(kMagic, 4);
  put_uint<std::uint16_t>(out, kFormatVersion);
  put_uint<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
  put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  put_uint<std::uint64_t>(out, entries.size());
  for (const auto& entry : entries) {
    if (entry.id().size() > 0xffff) throw DataError("record id longer than 65535 bytes");
    if (entry.dim() != dim) {
      throw DimensionError("record '" + entry.id() + "' has h=" + std::to_string(entry.dim()) +
                           ", file has h=" + std::to_string(dim));
    }
    put_uint<std::uint16_t>(out, static_cast<std::uint16_t>(entry.id().size()));
    out.append(entry.id());
    put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(entry.rows()));
    const Grid grid = entry.grid().value_or(Grid{});
    put_uint<std::uint32_t>(out, grid.rows);
    put_uint<std::uint32_t>(out, grid.cols);
    for (float v : entry.values()) {
      if (dtype == DType::kFloat32) {
        put_uint<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
      } else {
        put_uint<std::uint16_t>(out, float_to_half(v));
      }
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write to '" + path.string() + "' failed");
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::vector<MultiVectorEmbedding> view;
  view.reserve(corpus.size());
  for (const auto& entry : corpus.shared_entries()) view.push_back(*entry);
  write_embeddings(view, corpus.dim(), path);
}

TokenTable read_token_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  TokenTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("tokens") ||
        !obj["id"].is_string() || !obj["tokens"].is_array()) {
      throw DataError(where + ": expected {\"id\": string, \"tokens\": array}");
    }
    std::vector<TokenMeta> tokens;
    for (const auto& t : obj["tokens"]) {
      if (!t.is_object() || !t.contains("text") || !t.contains("kind") ||
          !t["text"].is_string() || !t["kind"].is_string()) {
        throw DataError(where + ": token must be {\"text\": string, \"kind\": string}");
      }
      tokens.push_back({t["text"].get<std::string>(),
                        token_kind_from_string(t["kind"].get<std::string>())});
    }
    auto id = obj["id"].get<std::string>();
    if (!table.emplace(id, std::move(tokens)).second) {
      throw DataError(where + ": duplicate id '" + id + "'");
    }
  }
  return table;
}

void write_token_sidecar(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& entry : corpus.shared_entries()) {
    if (!entry->has_tokens()) continue;
    nlohmann::json tokens = nlohmann::json::array();
    for (const auto& t : entry->tokens()) {
      tokens.push_back({{"text", t.text}, {"kind", std::string(to_string(t.kind))}});
    }
    nlohmann::json obj = {{"id", entry->id()}, {"tokens", std::move(tokens)}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace vdr
