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

#include "vdr/coverage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vdr {

std::size_t Bitmap::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

void OcrPage::validate() const {
  if (width == 0 || height == 0) throw DataError("OCR page '" + doc_id + "' has zero size");
  constexpr double kSlack = 1e-9;
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const auto& box = boxes[b];
    const bool bad_extent = !(box.w > 0) || !(box.h > 0);
    const bool outside = box.x < -kSlack || box.y < -kSlack ||
                         box.x + box.w > static_cast<double>(width) + kSlack ||
                         box.y + box.h > static_cast<double>(height) + kSlack;
    if (bad_extent || outside) {
      std::ostringstream msg;
      msg << "OCR page '" << doc_id << "': box " << b << " (" << box.x << ", " << box.y << ", "
          << box.w << ", " << box.h << ") is " << (bad_extent ? "empty" : "outside the page");
      throw DataError(msg.str());
    }
  }
}

Bitmap rasterize_boxes(const OcrPage& page) {
  page.validate();
  Bitmap mask(page.width, page.height);
  auto clamp_edge = [](double v, std::size_t limit) {
    const long r = std::lround(v);
    return static_cast<std::size_t>(std::clamp<long>(r, 0, static_cast<long>(limit)));
  };
  for (const auto& box : page.boxes) {
    const auto x0 = clamp_edge(box.x, page.width);
    const auto x1 = clamp_edge(box.x + box.w, page.width);
    const auto y0 = clamp_edge(box.y, page.height);
    const auto y1 = clamp_edge(box.y + box.h, page.height);
    for (std::size_t y = y0; y < y1; ++y) {
      std::fill(mask.bits.begin() + static_cast<std::ptrdiff_t>(y * page.width + x0),
                mask.bits.begin() + static_cast<std::ptrdiff_t>(y * page.width + x1), 1);
    }
  }
  return mask;
}

Bitmap background_mask(const GrayImage& image, std::uint8_t threshold) {
  Bitmap mask(image.width, image.height);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    mask.bits[i] = image.pixels[i] >= threshold ? 1 : 0;
  }
  return mask;
}

CoverageAreas coverage_areas(const OcrPage& page, const Bitmap& background) {
  if (background.width != page.width || background.height != page.height) {
    std::ostringstream msg;
    msg << "OCR page '" << page.doc_id << "' is " << page.width << "x" << page.height
        << " but the background mask is " << background.width << "x" << background.height;
    throw DataError(msg.str());
  }
  const Bitmap text = rasterize_boxes(page);
  CoverageAreas areas;
  areas.total = page.width * page.height;
  for (std::size_t i = 0; i < areas.total; ++i) {
    const bool is_text = text.bits[i] != 0;
    const bool is_bg = background.bits[i] != 0;
    areas.text += is_text;
    areas.background += is_bg;
    areas.text_background += is_text && is_bg;
  }
  return areas;
}

VisualFeatures coverage(const OcrPage& page, const Bitmap& background) {
  const auto areas = coverage_areas(page, background);
  const double total = static_cast<double>(areas.total);
  VisualFeatures features;
  features.c_text = static_cast<double>(areas.text - areas.text_background) / total;
  features.c_nontext = (total - static_cast<double>(areas.text) -
                        static_cast<double>(areas.background)) /
                       total;
  if (features.c_nontext < -1e-9) {
    std::ostringstream msg;
    msg << "OCR page '" << page.doc_id << "': background mask inconsistent with text boxes"
        << " (A_total=" << areas.total << ", A_t=" << areas.text
        << ", A_tbg=" << areas.text_background << ", A_bg=" << areas.background << ")";
    throw DataError(msg.str());
  }
  features.c_background = 1.0 - (features.c_text + features.c_nontext);
  for (const auto& box : page.boxes) {
    std::istringstream words(box.text);
    std::string word;
    while (words >> word) ++features.token_count;
  }
  return features;
}

std::vector<OcrPage> load_ocr_pages(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<OcrPage> pages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      const auto obj = nlohmann::json::parse(line);
      OcrPage page;
      page.doc_id = obj.at("doc_id").get<std::string>();
      page.width = obj.at("width").get<std::size_t>();
      page.height = obj.at("height").get<std::size_t>();
      for (const auto& b : obj.at("boxes")) {
        page.boxes.push_back({b.at("x").get<double>(), b.at("y").get<double>(),
                              b.at("w").get<double>(), b.at("h").get<double>(),
                              b.value("text", std::string{})});
      }
      page.validate();
      pages.push_back(std::move(page));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return pages;
}

void write_ocr_pages(const std::vector<OcrPage>& pages, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& page : pages) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : page.boxes) {
      boxes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}, {"text", b.text}});
    }
    nlohmann::json obj = {{"doc_id", page.doc_id},
                          {"width", page.width},
                          {"height", page.height},
                          {"boxes", std::move(boxes)}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

OcrIndex build_ocr_index(const std::vector<OcrPage>& pages) {
  OcrIndex index;
  for (const auto& page : pages) {
    auto& tokens = index[page.doc_id];
    for (const auto& box : page.boxes) add_ocr_tokens(box.text, tokens);
  }
  return index;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  auto next_token = [&]() {
    std::string token;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!token.empty()) break;
        continue;
      }
      token.push_back(c);
    }
    return token;
  };
  if (next_token() != "P5") throw DataError(path.string() + ": not a binary PGM (P5) file");
  GrayImage image;
  try {
    image.width = std::stoul(next_token());
    image.height = std::stoul(next_token());
    if (std::stoul(next_token()) != 255) {
      throw DataError(path.string() + ": only maxval 255 is supported");
    }
  } catch (const std::logic_error&) {
    throw DataError(path.string() + ": malformed PGM header");
  }
  image.pixels.resize(image.width * image.height);
  in.read(reinterpret_cast<char*>(image.pixels.data()),
          static_cast<std::streamsize>(image.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != image.pixels.size()) {
    throw DataError(path.string() + ": truncated PGM payload");
  }
  return image;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace vdr
