#include "holo/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace holo {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

void read_pgm_header(std::ifstream& in, const fs::path& path, int& w, int& h,
                     int& maxval) {
  std::string magic;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P5" || w <= 0 || h <= 0)
    throw IoError("malformed PGM header: " + path.string());
  in.get();  // single whitespace before the raster
}

double parse_double(const std::string& text, const fs::path& path) {
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw IoError("bad numeric field in " + path.string());
  }
}

}  // namespace

void write_pgm16(const fs::path& path, const ImageGrid& grid) {
  for (double v : grid.values())
    if (v < 0.0 || v > 65535.0 || v != std::floor(v))
      throw DomainError("pgm16 needs integer values in [0, 65535]: " +
                        path.string());
  std::ofstream out = open_out(path);
  out << "P5\n" << grid.width() << " " << grid.height() << "\n65535\n";
  std::vector<unsigned char> bytes(grid.size() * 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint16_t v = std::uint16_t(grid[i]);
    bytes[2 * i] = (unsigned char)(v >> 8);
    bytes[2 * i + 1] = (unsigned char)(v & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw IoError("short write: " + path.string());
}

ImageGrid read_pgm16(const fs::path& path) {
  std::ifstream in = open_in(path);
  int w, h, maxval;
  read_pgm_header(in, path, w, h, maxval);
  if (maxval != 65535) throw IoError("expected 16-bit PGM: " + path.string());
  std::vector<unsigned char> bytes(std::size_t(w) * h * 2);
  in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!in) throw IoError("short read: " + path.string());
  ImageGrid grid(w, h, Unit::Photons);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = double((std::uint16_t(bytes[2 * i]) << 8) | bytes[2 * i + 1]);
  return grid;
}

void write_mask_pgm(const fs::path& path, const PixelMask& mask) {
  std::ofstream out = open_out(path);
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<unsigned char> bytes(mask.bits.size());
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = mask.bits[i] ? 255 : 0;
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw IoError("short write: " + path.string());
}

PixelMask read_mask_pgm(const fs::path& path) {
  std::ifstream in = open_in(path);
  int w, h, maxval;
  read_pgm_header(in, path, w, h, maxval);
  if (maxval != 255) throw IoError("expected 8-bit PGM: " + path.string());
  std::vector<unsigned char> bytes(std::size_t(w) * h);
  in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!in) throw IoError("short read: " + path.string());
  PixelMask mask(w, h);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    mask.bits[i] = bytes[i] ? 1 : 0;
  return mask;
}

void write_f32(const fs::path& path, const ImageGrid& grid) {
  std::ofstream out = open_out(path);
  out << "HOLO_F32 v1\n"
      << "width " << grid.width() << "\n"
      << "height " << grid.height() << "\n"
      << "unit " << unit_name(grid.unit()) << "\n"
      << "data\n";
  static_assert(sizeof(float) == 4);
  std::vector<unsigned char> bytes(grid.size() * 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const float f = float(grid[i]);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    bytes[4 * i] = (unsigned char)(u & 0xFF);
    bytes[4 * i + 1] = (unsigned char)((u >> 8) & 0xFF);
    bytes[4 * i + 2] = (unsigned char)((u >> 16) & 0xFF);
    bytes[4 * i + 3] = (unsigned char)((u >> 24) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw IoError("short write: " + path.string());
}

ImageGrid read_f32(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "HOLO_F32 v1")
    throw IoError("bad raster magic: " + path.string());
  int w = 0, h = 0;
  std::string unit = "dimensionless";
  while (std::getline(in, line)) {
    if (line == "data") break;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "width") fields >> w;
    else if (key == "height") fields >> h;
    else if (key == "unit") fields >> unit;
    else throw IoError("unknown raster field '" + key + "': " + path.string());
    if (!fields) throw IoError("malformed raster header: " + path.string());
  }
  if (w <= 0 || h <= 0) throw IoError("missing raster dims: " + path.string());
  std::vector<unsigned char> bytes(std::size_t(w) * h * 4);
  in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!in) throw IoError("short read: " + path.string());
  ImageGrid grid(w, h, unit_from_name(unit));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::uint32_t u = std::uint32_t(bytes[4 * i]) |
                      (std::uint32_t(bytes[4 * i + 1]) << 8) |
                      (std::uint32_t(bytes[4 * i + 2]) << 16) |
                      (std::uint32_t(bytes[4 * i + 3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    grid[i] = double(f);
  }
  return grid;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  if (!out) throw IoError("short write: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_stack(const fs::path& dir, const FrameStack& stack,
                 std::uint64_t seed, bool integer_counts) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());

  std::ostringstream meta;
  meta << "m " << stack.schedule.size() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", stack.exposure);
  meta << "exposure_s " << buf << "\n";
  meta << "seed " << seed << "\n";
  meta << "format " << (integer_counts ? "pgm16" : "f32") << "\n";
  meta << "scale 1\n";
  meta << "phase_steps";
  for (double s : stack.schedule.steps()) {
    std::snprintf(buf, sizeof buf, " %.17g", s);
    meta << buf;
  }
  meta << "\n";
  write_text_file(dir / "stack.meta", meta.str());

  for (int m = 0; m < stack.schedule.size(); ++m) {
    std::snprintf(buf, sizeof buf, "frame_%02d.%s", m,
                  integer_counts ? "pgm" : "f32");
    const fs::path path = dir / buf;
    if (integer_counts)
      write_pgm16(path, stack.frames[std::size_t(m)]);
    else
      write_f32(path, stack.frames[std::size_t(m)]);
  }
}

FrameStack read_stack(const fs::path& dir) {
  const std::string meta = read_text_file(dir / "stack.meta");
  std::istringstream lines(meta);
  std::string line;
  int m = 0;
  double exposure = 0.0;
  std::string format = "pgm16";
  std::vector<double> steps;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "m") fields >> m;
    else if (key == "exposure_s") {
      std::string v;
      fields >> v;
      exposure = parse_double(v, dir / "stack.meta");
    } else if (key == "seed") {
      std::uint64_t ignored;
      fields >> ignored;
    } else if (key == "format") fields >> format;
    else if (key == "scale") {
      double ignored;
      fields >> ignored;
    } else if (key == "phase_steps") {
      std::string v;
      while (fields >> v) steps.push_back(parse_double(v, dir / "stack.meta"));
    }
  }
  if (m < 3 || int(steps.size()) != m)
    throw IoError("malformed stack.meta: " + dir.string());

  std::vector<ImageGrid> frames;
  frames.reserve(std::size_t(m));
  char buf[64];
  for (int i = 0; i < m; ++i) {
    std::snprintf(buf, sizeof buf, "frame_%02d.%s", i,
                  format == "pgm16" ? "pgm" : "f32");
    const fs::path path = dir / buf;
    frames.push_back(format == "pgm16" ? read_pgm16(path) : read_f32(path));
  }
  return FrameStack(PhaseStepSchedule(std::move(steps)), std::move(frames),
                    exposure);
}

}  // namespace holo
