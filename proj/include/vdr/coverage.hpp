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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vdr/index_search.hpp"

namespace vdr {

// 8-bit single-channel raster, row-major.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

// One flag per pixel, row-major; 1 = set.
struct Bitmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;

  Bitmap() = default;
  Bitmap(std::size_t w, std::size_t h, bool value = false)
      : width(w), height(h), bits(w * h, value ? 1 : 0) {}
  bool at(std::size_t x, std::size_t y) const { return bits[y * width + x] != 0; }
  void set(std::size_t x, std::size_t y, bool value = true) { bits[y * width + x] = value ? 1 : 0; }
  std::size_t count() const;
};

struct OcrBox {
  double x = 0, y = 0, w = 0, h = 0;
  std::string text;
};

struct OcrPage {
  std::string doc_id;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<OcrBox> boxes;

  // Boxes must have positive extent and lie inside the page.
  void validate() const;
};

struct VisualFeatures {
  double c_text = 0.0;        // C_t
  double c_nontext = 0.0;     // C_i
  double c_background = 1.0;  // C_empty, the residual
  std::size_t token_count = 0;
};

// Pixel areas behind a VisualFeatures record.
struct CoverageAreas {
  std::size_t total = 0;
  std::size_t text = 0;                // union of OCR boxes
  std::size_t text_background = 0;     // background pixels inside the union
  std::size_t background = 0;          // background pixels over the page
};

// Pixel (c, r) belongs to a box when c in [round(x), round(x + w)) and
// r in [round(y), round(y + h)).
Bitmap rasterize_boxes(const OcrPage& page);

// Pixel is background iff luminance >= threshold.
Bitmap background_mask(const GrayImage& image, std::uint8_t threshold = 250);

CoverageAreas coverage_areas(const OcrPage& page, const Bitmap& background);
// Throws DataError (carrying all four areas) when the background mask and the
// boxes imply a negative non-text area.
VisualFeatures coverage(const OcrPage& page, const Bitmap& background);

// Line-delimited {"doc_id","width","height","boxes":[{"x","y","w","h","text"}]}.
std::vector<OcrPage> load_ocr_pages(const std::filesystem::path& path);
void write_ocr_pages(const std::vector<OcrPage>& pages, const std::filesystem::path& path);

// doc_id -> normalized whitespace-split box tokens.
OcrIndex build_ocr_index(const std::vector<OcrPage>& pages);

// Binary PGM (P5, maxval 255).
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

}  // namespace vdr
