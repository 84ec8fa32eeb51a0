#pragma once

// On-disk formats and synthetic volume generation.
//
// All multi-byte fields are little-endian regardless of host.
//
// Volume file ("S3DV"):
//   0   magic      4 bytes  "S3DV"
//   4   version    u16      1
//   6   dtype      u16      0 = float32, 1 = float64
//   8   n1, n2, n3 u32 x 3
//   20  payload    n1*n2*n3 scalars, mode 3 fastest
//
// Model file ("S3DM"):
//   0   magic      4 bytes  "S3DM"
//   4   version    u16      1
//   6   method     u16      0 = s3dsvd, 1 = tucker, 2 = cpd
//   8   n1, n2, n3 u32 x 3
//   20  r          u32
//   24  U1, U2, U3 float64, column-major n_m x r each
//       s3dsvd: core (r^3 float64, mode 3 fastest), then qsigma (r float64)
//       tucker: core (r^3 float64, mode 3 fastest)
//       cpd:    weights (r float64), then seed (u64)
//
// Factor columns are stored in coefficient order, so the first j columns of
// each factor plus the leading j x j x j core block form a valid level-j
// model; read_model_prefix() fetches only those bytes.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include <volrank/baselines.hpp>
#include <volrank/s3dsvd.hpp>
#include <volrank/tensor.hpp>

namespace volrank {

enum class Dtype : std::uint16_t { float32 = 0, float64 = 1 };

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kVolumeHeaderBytes = 20;
inline constexpr std::size_t kModelHeaderBytes = 24;

std::vector<std::uint8_t> encode_volume(const Tensor3& x, Dtype dtype);
/// Throws ParseError for bad magic, unknown version/dtype, zero extents,
/// truncated or oversized payloads, and non-finite values.
Tensor3 decode_volume(std::span<const std::uint8_t> bytes);
/// Dtype recorded in an encoded volume header.
Dtype volume_dtype(std::span<const std::uint8_t> bytes);

void write_volume(const std::filesystem::path& path, const Tensor3& x, Dtype dtype);
Tensor3 read_volume(const std::filesystem::path& path);

using AnyModel = std::variant<S3dModel, TuckerModel, CpModel>;

Method method_of(const AnyModel& model) noexcept;

std::vector<std::uint8_t> encode_model(const AnyModel& model);
AnyModel decode_model(std::span<const std::uint8_t> bytes);

void write_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel read_model(const std::filesystem::path& path);

/// Level-j view of an s3dsvd or tucker model file, reading only the leading
/// j columns of each factor and the leading j^3 core block. Throws
/// ArgumentError for cpd files or j outside [1, r].
AnyModel read_model_prefix(const std::filesystem::path& path, std::size_t level);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// (x - min) / (max - min). Throws DegenerateInputError for constant input.
Tensor3 normalize_01(const Tensor3& x);

enum class SyntheticKind { multirank, blobs, blobs_noisy };

SyntheticKind parse_synthetic_kind(std::string_view name);

struct SyntheticParams {
  std::size_t rank = 4;      ///< multirank: multilinear rank rho
  std::size_t blobs = 40;    ///< blobs: number of Gaussian blobs
  bool isotropic = false;    ///< blobs: equal widths, no rotation (separable)
  double noise = 0.05;       ///< blobs_noisy: uniform noise amplitude
};

/// Deterministic for a given seed.
///  multirank:   core(rho^3, uniform [-1,1)) x1 Q1 x2 Q2 x3 Q3, Q_m orthonormal
///  blobs:       sum of rotated anisotropic Gaussians scaled to peak 1
///  blobs_noisy: blobs + uniform [-noise, noise), clipped to [0, 1]
Tensor3 gen_synthetic(SyntheticKind kind, Dims dims, const SyntheticParams& params,
                      std::uint64_t seed);

}  // namespace volrank
