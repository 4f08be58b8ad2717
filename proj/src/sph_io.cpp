#include "sphaar/sph_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "sphaar/errors.hpp"

namespace sphaar {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'H', '1'};
constexpr std::uint16_t kKindSignal = 1;
constexpr std::uint16_t kKindMask = 2;
constexpr std::uint16_t kKindPyramid = 3;
// Level guard for loaders so corrupt headers cannot trigger huge allocations.
constexpr std::uint32_t kMaxIoLevel = 16;

class FileWriter {
public:
    explicit FileWriter(const std::string& path)
        : final_path_(path), tmp_path_(path + ".tmp") {
        f_ = std::fopen(tmp_path_.c_str(), "wb");
        if (!f_) throw IoError("cannot open for writing: " + tmp_path_);
    }
    ~FileWriter() {
        if (f_) {
            std::fclose(f_);
            std::remove(tmp_path_.c_str());
        }
    }
    void bytes(const void* data, size_t n) {
        if (std::fwrite(data, 1, n, f_) != n) throw IoError("short write: " + tmp_path_);
    }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u16(std::uint16_t v) {
        const std::uint8_t b[2] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8)};
        bytes(b, 2);
    }
    void u32(std::uint32_t v) {
        std::uint8_t b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
        bytes(b, 4);
    }
    void u64(std::uint64_t v) {
        std::uint8_t b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
        bytes(b, 8);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void commit() {
        if (std::fflush(f_) != 0) throw IoError("flush failed: " + tmp_path_);
        std::fclose(f_);
        f_ = nullptr;
        std::error_code ec;
        std::filesystem::rename(tmp_path_, final_path_, ec);
        if (ec) {
            std::remove(tmp_path_.c_str());
            throw IoError("rename failed: " + final_path_ + ": " + ec.message());
        }
    }

private:
    std::string final_path_;
    std::string tmp_path_;
    std::FILE* f_ = nullptr;
};

class FileReader {
public:
    explicit FileReader(const std::string& path) : path_(path) {
        f_ = std::fopen(path.c_str(), "rb");
        if (!f_) throw IoError("cannot open for reading: " + path);
    }
    ~FileReader() {
        if (f_) std::fclose(f_);
    }
    void bytes(void* data, size_t n) {
        if (std::fread(data, 1, n, f_) != n) throw FormatError("truncated file: " + path_);
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    std::uint16_t u16() {
        std::uint8_t b[2];
        bytes(b, 2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        std::uint8_t b[4];
        bytes(b, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint8_t b[8];
        bytes(b, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    bool at_eof() {
        const int c = std::fgetc(f_);
        if (c == EOF) return true;
        std::ungetc(c, f_);
        return false;
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::FILE* f_ = nullptr;
};

struct Header {
    std::uint16_t kind;
    std::uint32_t level;
    std::uint8_t channels;
};

void write_header(FileWriter& w, std::uint16_t kind, std::uint32_t level, std::uint8_t channels) {
    w.bytes(kMagic, 4);
    w.u16(kind);
    w.u32(level);
    w.u8(channels);
    w.u8(0);  // canonical face order
}

Header read_header(FileReader& r, std::uint16_t want_kind) {
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad magic: " + r.path());
    Header h;
    h.kind = r.u16();
    if (h.kind != want_kind) throw FormatError("unexpected payload kind: " + r.path());
    h.level = r.u32();
    if (h.level > kMaxIoLevel) throw FormatError("unreasonable level in header: " + r.path());
    h.channels = r.u8();
    if (h.channels < 1) throw FormatError("zero channels in header: " + r.path());
    if (r.u8() != 0) throw FormatError("unknown face-order tag: " + r.path());
    return h;
}

}  // namespace

void save_signal(const std::string& path, const SphericalSignal& sig) {
    sig.validate();
    FileWriter w(path);
    write_header(w, kKindSignal, static_cast<std::uint32_t>(sig.level),
                 static_cast<std::uint8_t>(sig.channels));
    for (const auto& ch : sig.values) {
        for (double v : ch) w.f64(v);
    }
    w.commit();
}

SphericalSignal load_signal(const std::string& path) {
    FileReader r(path);
    const Header h = read_header(r, kKindSignal);
    SphericalSignal sig = SphericalSignal::zeros(static_cast<int>(h.level), h.channels);
    for (auto& ch : sig.values) {
        for (double& v : ch) v = r.f64();
    }
    if (!r.at_eof()) throw FormatError("trailing bytes: " + path);
    sig.validate();
    return sig;
}

void save_mask(const std::string& path, const Mask& mask) {
    mask.validate();
    FileWriter w(path);
    write_header(w, kKindMask, static_cast<std::uint32_t>(mask.level), 1);
    for (std::uint8_t f : mask.flags) w.u8(f ? 1 : 0);
    w.commit();
}

Mask load_mask(const std::string& path) {
    FileReader r(path);
    const Header h = read_header(r, kKindMask);
    if (h.channels != 1) throw FormatError("mask must be single-channel: " + path);
    Mask m;
    m.level = static_cast<int>(h.level);
    m.flags.resize(patch_count(m.level));
    for (auto& f : m.flags) {
        f = r.u8();
        if (f > 1) throw FormatError("mask flag not 0/1: " + path);
    }
    if (!r.at_eof()) throw FormatError("trailing bytes: " + path);
    return m;
}

void save_pyramid(const std::string& path, const FrameletPyramid& pyr) {
    pyr.validate();
    FileWriter w(path);
    write_header(w, kKindPyramid, static_cast<std::uint32_t>(pyr.fine_level),
                 static_cast<std::uint8_t>(pyr.channels));
    w.u32(static_cast<std::uint32_t>(pyr.depth));
    w.u32(1 + kNumDetailBands * static_cast<std::uint32_t>(pyr.depth));
    w.u32(static_cast<std::uint32_t>(pyr.coarse_level()));
    w.u32(0);
    w.u64(0);
    w.u64(pyr.lowpass_length());
    for (int level = pyr.coarse_level(); level < pyr.fine_level; ++level) {
        for (int band = 1; band <= kNumDetailBands; ++band) {
            w.u32(static_cast<std::uint32_t>(level));
            w.u32(static_cast<std::uint32_t>(band));
            w.u64(pyr.band_offset(level, band));
            w.u64(pyr.band_length(level));
        }
    }
    for (const auto& ch : pyr.values) {
        for (double v : ch) w.f64(v);
    }
    w.commit();
}

FrameletPyramid load_pyramid(const std::string& path) {
    FileReader r(path);
    const Header h = read_header(r, kKindPyramid);
    const std::uint32_t depth = r.u32();
    if (depth < 1 || depth > h.level) throw FormatError("pyramid depth out of range: " + path);
    const std::uint32_t sections = r.u32();
    if (sections != 1 + kNumDetailBands * depth) {
        throw FormatError("unexpected section count: " + path);
    }
    FrameletPyramid pyr = FrameletPyramid::zeros(static_cast<int>(h.level),
                                                 static_cast<int>(depth), h.channels);
    for (std::uint32_t s = 0; s < sections; ++s) {
        const std::uint32_t level = r.u32();
        const std::uint32_t band = r.u32();
        const std::uint64_t offset = r.u64();
        const std::uint64_t length = r.u64();
        std::uint64_t want_off = 0, want_len = 0;
        if (s == 0) {
            if (level != static_cast<std::uint32_t>(pyr.coarse_level()) || band != 0) {
                throw FormatError("first section is not the lowpass: " + path);
            }
            want_len = pyr.lowpass_length();
        } else {
            want_off = pyr.band_offset(static_cast<int>(level), static_cast<int>(band));
            want_len = pyr.band_length(static_cast<int>(level));
        }
        if (offset != want_off || length != want_len) {
            throw FormatError("section table does not match canonical layout: " + path);
        }
    }
    for (auto& ch : pyr.values) {
        for (double& v : ch) v = r.f64();
    }
    if (!r.at_eof()) throw FormatError("trailing bytes: " + path);
    return pyr;
}

namespace {

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* f = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (f) std::fclose(f);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

}  // namespace

EquirectImage load_png(const std::string& path) {
    PngReadCloser c;
    c.f = std::fopen(path.c_str(), "rb");
    if (!c.f) throw IoError("cannot open for reading: " + path);
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, c.f) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw FormatError("not a PNG file: " + path);
    }
    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!c.png) throw ResourceError("png reader allocation failed");
    c.info = png_create_info_struct(c.png);
    if (!c.info) throw ResourceError("png info allocation failed");
    if (setjmp(png_jmpbuf(c.png))) throw FormatError("corrupt PNG: " + path);
    png_init_io(c.png, c.f);
    png_set_sig_bytes(c.png, 8);
    png_read_info(c.png, c.info);

    png_set_strip_16(c.png);
    png_set_strip_alpha(c.png);
    png_set_packing(c.png);
    const int color = png_get_color_type(c.png, c.info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(c.png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(c.png, c.info) < 8) {
        png_set_expand_gray_1_2_4_to_8(c.png);
    }
    png_read_update_info(c.png, c.info);

    const int width = static_cast<int>(png_get_image_width(c.png, c.info));
    const int height = static_cast<int>(png_get_image_height(c.png, c.info));
    const int channels = static_cast<int>(png_get_channels(c.png, c.info));
    if (channels != 1 && channels != 3) throw FormatError("unsupported PNG channel count: " + path);

    std::vector<unsigned char> rowbuf(static_cast<size_t>(width) * channels);
    EquirectImage img = EquirectImage::filled(width, height, channels, 0.0);
    for (int row = 0; row < height; ++row) {
        png_read_row(c.png, rowbuf.data(), nullptr);
        for (int col = 0; col < width; ++col) {
            for (int ch = 0; ch < channels; ++ch) {
                img.at(row, col, ch) = static_cast<double>(rowbuf[static_cast<size_t>(col) * channels + ch]);
            }
        }
    }
    png_read_end(c.png, nullptr);
    return img;
}

void save_png(const std::string& path, const EquirectImage& img) {
    img.validate();
    if (img.channels != 1 && img.channels != 3) {
        throw InputDomainError("PNG export supports 1 or 3 channels");
    }
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + tmp);
    {
        PngWriteCloser c;
        c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!c.png) {
            std::fclose(f);
            std::remove(tmp.c_str());
            throw ResourceError("png writer allocation failed");
        }
        c.info = png_create_info_struct(c.png);
        if (!c.info || setjmp(png_jmpbuf(c.png))) {
            std::fclose(f);
            std::remove(tmp.c_str());
            throw IoError("PNG write failed: " + path);
        }
        png_init_io(c.png, f);
        png_set_IHDR(c.png, c.info, static_cast<png_uint_32>(img.width),
                     static_cast<png_uint_32>(img.height), 8,
                     img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(c.png, c.info);
        std::vector<unsigned char> rowbuf(static_cast<size_t>(img.width) * img.channels);
        for (int row = 0; row < img.height; ++row) {
            for (int col = 0; col < img.width; ++col) {
                for (int ch = 0; ch < img.channels; ++ch) {
                    const double v = std::round(img.at(row, col, ch));
                    rowbuf[static_cast<size_t>(col) * img.channels + ch] =
                        static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
                }
            }
            png_write_row(c.png, rowbuf.data());
        }
        png_write_end(c.png, nullptr);
    }
    if (std::fclose(f) != 0) {
        std::remove(tmp.c_str());
        throw IoError("PNG close failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw IoError("rename failed: " + path + ": " + ec.message());
    }
}

std::string file_hash_hex(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open for reading: " + path);
    std::uint64_t h = 14695981039346656037ull;
    unsigned char buf[1 << 14];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) {
        for (size_t i = 0; i < n; ++i) {
            h ^= buf[i];
            h *= 1099511628211ull;
        }
    }
    const bool bad = std::ferror(f) != 0;
    std::fclose(f);
    if (bad) throw IoError("read failed: " + path);
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

std::string partition_metadata_json(const Partition& part) {
    nlohmann::json doc;
    doc["level"] = part.level();
    doc["face_order"] = nlohmann::json::array();
    for (int f = 0; f < kNumFaces; ++f) doc["face_order"].push_back(kFaceNames[f]);
    nlohmann::json levels = nlohmann::json::array();
    for (int j = 0; j < part.level(); ++j) {
        nlohmann::json nodes = nlohmann::json::array();
        for (std::uint64_t idx = 0; idx < patch_count(j); ++idx) {
            const SplitInfo& s = part.split(j, idx);
            nodes.push_back({{"axis", s.axis == 0 ? "u" : "v"},
                             {"first", s.first},
                             {"low", s.low},
                             {"high", s.high}});
        }
        levels.push_back(nodes);
    }
    doc["splits"] = levels;
    return doc.dump();
}

}  // namespace sphaar
