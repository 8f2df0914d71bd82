#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "smbcs/correlations.hpp"
#include "smbcs/interferometer.hpp"
#include "smbcs/sampler.hpp"
#include "smbcs/spectra.hpp"

namespace smbcs {

inline constexpr int kSchemaVersion = 1;

/// {omega_c, t_c, delta_omega, shape}
nlohmann::json to_json(const SpectralMode& mode);
SpectralMode spectral_mode_from_json(const nlohmann::json& j);

/// {M, seed, generator, data}; data is the 2 M^2 interleaved re/im doubles
/// in row-major order. Doubles are printed with round-trip precision.
nlohmann::json unitary_to_json(const Interferometer& interferometer);
Interferometer unitary_from_json(const nlohmann::json& j);

/// Binary layout (little endian):
///   8 bytes  magic "SMBCSU01"
///   u64      M
///   u64      seed
///   u32      generator name length, then the name bytes
///   f64[2M^2] interleaved re/im, row-major
void write_unitary_binary(std::ostream& out, const Interferometer& interferometer);
Interferometer read_unitary_binary(std::istream& in);

/// Writes JSON for a .json extension, binary otherwise.
void save_unitary(const std::filesystem::path& path, const Interferometer& interferometer);
/// Detects the format from the leading magic bytes.
Interferometer load_unitary(const std::filesystem::path& path);

/// {mode, ports, bins, probability, perm_modulus, seed, config_hash}
nlohmann::json outcome_record(const DetectionOutcome& outcome, double probability,
                              double perm_modulus, std::uint64_t seed,
                              std::string_view config_hash);

nlohmann::json sample_record_to_json(const SampleRecord& record,
                                     std::string_view config_hash);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Minimal CSV writer: a header row, then rows of preformatted cells.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace smbcs
