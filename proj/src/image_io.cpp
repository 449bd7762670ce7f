// Copyright (c) the LogoForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logoforge/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>

#include <jpeglib.h>
#include <png.h>

namespace logoforge {

namespace {

struct FileHandle {
  std::FILE* fp = nullptr;
  explicit FileHandle(const std::string& path, const char* mode)
      : fp(std::fopen(path.c_str(), mode)) {}
  ~FileHandle() {
    if (fp) std::fclose(fp);
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
};

struct PngErrorCtx {
  std::string message;
};

extern "C" void lf_png_error(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<PngErrorCtx*>(png_get_error_ptr(png));
  if (ctx) ctx->message = msg ? msg : "unknown libpng error";
  longjmp(png_jmpbuf(png), 1);
}

extern "C" void lf_png_warning(png_structp, png_const_charp) {}

ImageBuffer load_png(std::FILE* fp, const std::string& path) {
  PngErrorCtx errctx;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errctx,
                                           lf_png_error, lf_png_warning);
  if (!png) throw IoError(path + ": png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError(path + ": png_create_info_struct failed");
  }

  // declared before setjmp; only mutated afterwards
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  int channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path + ": PNG decode error: " + errctx.message);
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  int bit_depth = 0, color_type = 0;
  png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);

  png_set_expand(png);  // palette -> rgb, gray<8 -> 8, tRNS -> alpha
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  channels = png_get_channels(png, info);
  if (channels != 3 && channels != 4) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path + ": unexpected channel count after expansion");
  }

  raw.resize(static_cast<std::size_t>(w) * h * channels);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = raw.data() + static_cast<std::size_t>(y) * w * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageBuffer img(static_cast<int>(w), static_cast<int>(h));
  if (channels == 3) {
    img.pixels.assign(raw.begin(), raw.end());
  } else {
    // composite over black: c' = c * a / 255
    const std::size_t n = static_cast<std::size_t>(w) * h;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t a = raw[i * 4 + 3];
      for (int c = 0; c < 3; ++c)
        img.pixels[i * 3 + c] =
            static_cast<std::uint8_t>((raw[i * 4 + c] * a + 127) / 255);
    }
  }
  return img;
}

void save_png(const ImageBuffer& img, std::FILE* fp, const std::string& path) {
  PngErrorCtx errctx;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errctx,
                                            lf_png_error, lf_png_warning);
  if (!png) throw IoError(path + ": png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError(path + ": png_create_info_struct failed");
  }

  std::vector<png_const_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = img.row(y);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path + ": PNG encode error: " + errctx.message);
  }

  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 4);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

struct JpegErrorCtx {
  jpeg_error_mgr mgr;
  jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

extern "C" void lf_jpeg_error_exit(j_common_ptr cinfo) {
  auto* ctx = reinterpret_cast<JpegErrorCtx*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, ctx->message);
  longjmp(ctx->jump, 1);
}

extern "C" void lf_jpeg_emit_message(j_common_ptr, int) {}

ImageBuffer load_jpeg(std::FILE* fp, const std::string& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorCtx err;
  err.message[0] = '\0';
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = lf_jpeg_error_exit;
  err.mgr.emit_message = lf_jpeg_emit_message;

  std::vector<std::uint8_t> out;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(path + ": JPEG decode error: " + std::string(err.message));
  }

  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  out.resize(static_cast<std::size_t>(w) * h * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  ImageBuffer img(w, h);
  img.pixels = std::move(out);
  return img;
}

void save_jpeg(const ImageBuffer& img, std::FILE* fp, const std::string& path) {
  jpeg_compress_struct cinfo;
  JpegErrorCtx err;
  err.message[0] = '\0';
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = lf_jpeg_error_exit;
  err.mgr.emit_message = lf_jpeg_emit_message;

  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    throw IoError(path + ": JPEG encode error: " + std::string(err.message));
  }

  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, fp);
  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 95, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img.row(static_cast<int>(cinfo.next_scanline)));
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
}

}  // namespace

ImageBuffer load_image(const std::string& path) {
  FileHandle file(path, "rb");
  if (!file.fp) throw IoError("cannot open \"" + path + "\" for reading");

  unsigned char magic[8] = {0};
  const std::size_t got = std::fread(magic, 1, sizeof(magic), file.fp);
  std::rewind(file.fp);

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) return load_png(file.fp, path);
  if (got >= 3 && magic[0] == 0xff && magic[1] == 0xd8 && magic[2] == 0xff)
    return load_jpeg(file.fp, path);
  throw IoError(path + ": unsupported format (not PNG or JPEG)");
}

void save_image(const ImageBuffer& img, const std::string& path, ImageFormat format) {
  if (img.width < 1 || img.height < 1 ||
      img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3)
    throw Error("save_image: malformed image buffer");
  FileHandle file(path, "wb");
  if (!file.fp) throw IoError("cannot open \"" + path + "\" for writing");
  if (format == ImageFormat::png)
    save_png(img, file.fp, path);
  else
    save_jpeg(img, file.fp, path);
  if (std::fflush(file.fp) != 0) throw IoError("write failed on \"" + path + "\"");
}

}  // namespace logoforge
