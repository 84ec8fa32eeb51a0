#include <volrank/volume_io.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <volrank/error.hpp>

namespace volrank {
namespace {

constexpr char kVolumeMagic[4] = {'S', '3', 'D', 'V'};
constexpr char kModelMagic[4] = {'S', '3', 'D', 'M'};

class ByteWriter {
 public:
  void magic(const char (&m)[4]) { bytes_.insert(bytes_.end(), m, m + 4); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v), 4); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void f64s(std::span<const double> vs) {
    for (double v : vs) f64(v);
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b) : b_(b) {}

  std::size_t offset() const noexcept { return pos_; }

  void expect_magic(const char (&m)[4]) {
    need(4, "magic");
    if (std::memcmp(b_.data(), m, 4) != 0) {
      throw ParseError(std::string("bad magic, expected \"") + std::string(m, 4) + "\"", 0);
    }
    pos_ = 4;
  }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(le(2, what)); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(le(4, what)); }
  std::uint64_t u64(const char* what) { return le(8, what); }
  double f64(const char* what) {
    const std::size_t at = pos_;
    const double v = std::bit_cast<double>(le(8, what));
    finite(v, at);
    return v;
  }
  float f32(const char* what) {
    const std::size_t at = pos_;
    const float v = std::bit_cast<float>(static_cast<std::uint32_t>(le(4, what)));
    finite(v, at);
    return v;
  }
  void f64s(std::span<double> out, const char* what) {
    for (double& v : out) v = f64(what);
  }
  void expect_end() {
    if (pos_ != b_.size()) {
      throw ParseError(std::to_string(b_.size() - pos_) + " trailing bytes after payload", pos_);
    }
  }

 private:
  static void finite(double v, std::size_t at) {
    if (!std::isfinite(v)) throw ParseError("non-finite value in payload", at);
  }
  void need(std::size_t n, const char* what) {
    if (b_.size() - pos_ < n) {
      throw ParseError(std::string("truncated input while reading ") + what, b_.size());
    }
  }
  std::uint64_t le(int n, const char* what) {
    need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

void put_dims(ByteWriter& w, const Dims& d) {
  w.u32(static_cast<std::uint32_t>(d.n1));
  w.u32(static_cast<std::uint32_t>(d.n2));
  w.u32(static_cast<std::uint32_t>(d.n3));
}

Dims get_dims(ByteReader& r) {
  const std::size_t at = r.offset();
  Dims d;
  d.n1 = r.u32("n1");
  d.n2 = r.u32("n2");
  d.n3 = r.u32("n3");
  if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0) throw ParseError("zero extent in dims", at);
  return d;
}

void check_version(std::uint16_t v, std::size_t at) {
  if (v != kFormatVersion) throw ParseError("unknown format version " + std::to_string(v), at);
}

Matrix get_matrix(ByteReader& r, std::size_t rows, std::size_t cols, const char* what) {
  Matrix m(rows, cols);
  r.f64s(m.data(), what);
  return m;
}

Tensor3 get_tensor(ByteReader& r, Dims d, const char* what) {
  Tensor3 t(d);
  r.f64s(t.data(), what);
  return t;
}

void put_header(ByteWriter& w, Method method, const Dims& d, std::size_t r) {
  w.magic(kModelMagic);
  w.u16(kFormatVersion);
  w.u16(static_cast<std::uint16_t>(method));
  put_dims(w, d);
  w.u32(static_cast<std::uint32_t>(r));
}

struct ModelHeader {
  Method method;
  Dims dims;
  std::size_t r;
};

ModelHeader get_model_header(ByteReader& rd) {
  rd.expect_magic(kModelMagic);
  check_version(rd.u16("version"), 4);
  const std::uint16_t code = rd.u16("method");
  if (code > 2) throw ParseError("unknown method code " + std::to_string(code), 6);
  ModelHeader h;
  h.method = static_cast<Method>(code);
  h.dims = get_dims(rd);
  h.r = rd.u32("r");
  if (h.r == 0 || (h.method != Method::cpd && h.r > h.dims.min())) {
    throw ParseError("rank " + std::to_string(h.r) + " invalid for dims", 20);
  }
  return h;
}

Dims model_dims(const AnyModel& m) {
  return std::visit(
      [](const auto& v) -> Dims {
        return Dims{v.factors[0].rows(), v.factors[1].rows(), v.factors[2].rows()};
      },
      m);
}

}  // namespace

std::vector<std::uint8_t> encode_volume(const Tensor3& x, Dtype dtype) {
  ByteWriter w;
  w.magic(kVolumeMagic);
  w.u16(kFormatVersion);
  w.u16(static_cast<std::uint16_t>(dtype));
  put_dims(w, x.dims());
  if (dtype == Dtype::float32) {
    for (double v : x.data()) w.f32(static_cast<float>(v));
  } else {
    w.f64s(x.data());
  }
  return w.take();
}

Dtype volume_dtype(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kVolumeMagic);
  check_version(r.u16("version"), 4);
  const std::uint16_t code = r.u16("dtype");
  if (code > 1) throw ParseError("unknown dtype code " + std::to_string(code), 6);
  return static_cast<Dtype>(code);
}

Tensor3 decode_volume(std::span<const std::uint8_t> bytes) {
  const Dtype dtype = volume_dtype(bytes);
  ByteReader r(bytes);
  r.u32("magic");
  r.u16("version");
  r.u16("dtype");
  const Dims d = get_dims(r);
  Tensor3 x(d);
  if (dtype == Dtype::float32) {
    for (double& v : x.data()) v = static_cast<double>(r.f32("payload"));
  } else {
    r.f64s(x.data(), "payload");
  }
  r.expect_end();
  return x;
}

void write_volume(const std::filesystem::path& path, const Tensor3& x, Dtype dtype) {
  write_file(path, encode_volume(x, dtype));
}

Tensor3 read_volume(const std::filesystem::path& path) { return decode_volume(read_file(path)); }

Method method_of(const AnyModel& model) noexcept {
  return static_cast<Method>(model.index());
}

std::vector<std::uint8_t> encode_model(const AnyModel& model) {
  ByteWriter w;
  const Dims d = model_dims(model);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        std::size_t r = m.factors[0].cols();
        put_header(w, method_of(model), d, r);
        for (const Matrix& f : m.factors) w.f64s(f.data());
        if constexpr (std::is_same_v<T, S3dModel>) {
          w.f64s(m.core.data());
          w.f64s(m.qsigma);
        } else if constexpr (std::is_same_v<T, TuckerModel>) {
          w.f64s(m.core.data());
        } else {
          w.f64s(m.weights);
          w.u64(m.seed);
        }
      },
      model);
  return w.take();
}

AnyModel decode_model(std::span<const std::uint8_t> bytes) {
  ByteReader rd(bytes);
  const ModelHeader h = get_model_header(rd);
  std::array<Matrix, 3> factors;
  for (int m = 1; m <= 3; ++m) factors[m - 1] = get_matrix(rd, h.dims[m], h.r, "factor");
  AnyModel out;
  switch (h.method) {
    case Method::s3dsvd: {
      S3dModel s;
      s.dims = h.dims;
      s.r = h.r;
      s.factors = std::move(factors);
      s.core = get_tensor(rd, Dims{h.r, h.r, h.r}, "core");
      s.qsigma.resize(h.r);
      rd.f64s(s.qsigma, "qsigma");
      out = std::move(s);
      break;
    }
    case Method::tucker: {
      TuckerModel t;
      t.factors = std::move(factors);
      t.core = get_tensor(rd, Dims{h.r, h.r, h.r}, "core");
      out = std::move(t);
      break;
    }
    case Method::cpd: {
      CpModel c;
      c.rank = h.r;
      c.factors = std::move(factors);
      c.weights.resize(h.r);
      rd.f64s(c.weights, "weights");
      c.seed = rd.u64("seed");
      out = std::move(c);
      break;
    }
  }
  rd.expect_end();
  return out;
}

void write_model(const std::filesystem::path& path, const AnyModel& model) {
  write_file(path, encode_model(model));
}

AnyModel read_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

AnyModel read_model_prefix(const std::filesystem::path& path, std::size_t level) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const auto file_size = static_cast<std::uint64_t>(std::filesystem::file_size(path));

  std::vector<std::uint8_t> head(kModelHeaderBytes);
  in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  ByteReader hr(head);
  const ModelHeader h = get_model_header(hr);
  if (h.method == Method::cpd) throw ArgumentError("cpd models have no progressive prefix");
  if (level < 1 || level > h.r) {
    throw ArgumentError("prefix level " + std::to_string(level) + " outside [1, " +
                        std::to_string(h.r) + "]");
  }
  const std::size_t r = h.r;
  const std::size_t j = level;
  const std::uint64_t factor_bytes = 8ull * (h.dims.n1 + h.dims.n2 + h.dims.n3) * r;
  const std::uint64_t core_at = kModelHeaderBytes + factor_bytes;
  const std::uint64_t expected =
      core_at + 8ull * r * r * r + (h.method == Method::s3dsvd ? 8ull * r : 0ull);
  if (file_size != expected) {
    throw ParseError("model file size " + std::to_string(file_size) + " does not match header",
                     std::min(file_size, expected));
  }

  auto read_doubles = [&](std::uint64_t at, std::span<double> out) {
    std::vector<std::uint8_t> buf(out.size() * 8);
    in.seekg(static_cast<std::streamoff>(at));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
      throw ParseError("truncated model file", at);
    }
    ByteReader br(buf);
    br.f64s(out, "payload");
  };

  std::array<Matrix, 3> factors;
  std::uint64_t at = kModelHeaderBytes;
  for (int m = 1; m <= 3; ++m) {
    factors[m - 1] = Matrix(h.dims[m], j);
    read_doubles(at, factors[m - 1].data());
    at += 8ull * h.dims[m] * r;
  }
  Tensor3 core(Dims{j, j, j});
  for (std::size_t a = 0; a < j; ++a)
    for (std::size_t b = 0; b < j; ++b) {
      read_doubles(core_at + 8ull * ((a * r + b) * r), {core.data().data() + core.offset(a, b, 0), j});
    }

  if (h.method == Method::tucker) {
    TuckerModel t;
    t.factors = std::move(factors);
    t.core = std::move(core);
    return t;
  }
  S3dModel s;
  s.dims = h.dims;
  s.r = j;
  s.factors = std::move(factors);
  s.core = std::move(core);
  s.qsigma.resize(j);
  read_doubles(core_at + 8ull * r * r * r, s.qsigma);
  return s;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Tensor3 normalize_01(const Tensor3& x) {
  const auto [lo_it, hi_it] = std::minmax_element(x.data().begin(), x.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw DegenerateInputError("cannot normalize a constant volume");
  Tensor3 out = x;
  const double inv = 1.0 / (hi - lo);
  for (double& v : out.data()) v = (v - lo) * inv;
  // Exact endpoints regardless of rounding in the affine map.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.data()[i] == lo) out.data()[i] = 0.0;
    if (x.data()[i] == hi) out.data()[i] = 1.0;
  }
  return out;
}

}  // namespace volrank
