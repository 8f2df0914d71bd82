#include "smbcs/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

constexpr std::array<char, 8> kUnitaryMagic = {'S', 'M', 'B', 'C', 'S', 'U', '0', '1'};
constexpr std::uint64_t kMaxUnitaryDimension = 1u << 14;

static_assert(std::endian::native == std::endian::little,
              "binary unitary I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw DomainError("unitary file: truncated");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

nlohmann::json to_json(const SpectralMode& mode) {
  return {{"omega_c", mode.central_frequency()},
          {"t_c", mode.central_time()},
          {"delta_omega", mode.bandwidth()},
          {"shape", std::string(to_string(mode.shape()))}};
}

SpectralMode spectral_mode_from_json(const nlohmann::json& j) {
  try {
    return SpectralMode(j.at("omega_c").get<double>(), j.at("t_c").get<double>(),
                        j.at("delta_omega").get<double>(),
                        spectral_shape_from_string(j.at("shape").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("SpectralMode JSON: ") + e.what());
  }
}

nlohmann::json unitary_to_json(const Interferometer& interferometer) {
  const auto& u = interferometer.matrix();
  nlohmann::json data = nlohmann::json::array();
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t k = 0; k < u.cols(); ++k) {
      data.push_back(u(i, k).real());
      data.push_back(u(i, k).imag());
    }
  const auto& prov = interferometer.provenance();
  return {{"M", u.rows()},
          {"seed", prov ? prov->seed : 0},
          {"generator", prov ? prov->generator : std::string("external")},
          {"data", std::move(data)}};
}

Interferometer unitary_from_json(const nlohmann::json& j) {
  try {
    const auto m = j.at("M").get<std::uint64_t>();
    if (m == 0 || m > kMaxUnitaryDimension) throw DomainError("unitary JSON: bad M");
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != 2 * m * m) {
      throw DomainError("unitary JSON: data must hold 2 M^2 numbers");
    }
    ComplexMatrix u(m, m);
    for (std::size_t i = 0; i < m * m; ++i) {
      u.data()[i] = Complex(data[2 * i].get<double>(), data[2 * i + 1].get<double>());
    }
    return Interferometer(std::move(u), Provenance{j.at("seed").get<std::uint64_t>(),
                                                   j.at("generator").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("unitary JSON: ") + e.what());
  }
}

void write_unitary_binary(std::ostream& out, const Interferometer& interferometer) {
  const auto& u = interferometer.matrix();
  const auto& prov = interferometer.provenance();
  const std::string generator = prov ? prov->generator : "external";
  out.write(kUnitaryMagic.data(), kUnitaryMagic.size());
  put<std::uint64_t>(out, u.rows());
  put<std::uint64_t>(out, prov ? prov->seed : 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(generator.size()));
  out.write(generator.data(), static_cast<std::streamsize>(generator.size()));
  for (std::size_t i = 0; i < u.rows() * u.cols(); ++i) {
    put<double>(out, u.data()[i].real());
    put<double>(out, u.data()[i].imag());
  }
}

Interferometer read_unitary_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kUnitaryMagic) {
    throw DomainError("unitary file: bad magic");
  }
  const auto m = get<std::uint64_t>(in);
  if (m == 0 || m > kMaxUnitaryDimension) throw DomainError("unitary file: bad M");
  const auto seed = get<std::uint64_t>(in);
  const auto name_length = get<std::uint32_t>(in);
  if (name_length > 4096) throw DomainError("unitary file: generator name too long");
  std::string generator(name_length, '\0');
  if (!in.read(generator.data(), name_length)) throw DomainError("unitary file: truncated");
  ComplexMatrix u(m, m);
  for (std::size_t i = 0; i < m * m; ++i) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    u.data()[i] = Complex(re, im);
  }
  return Interferometer(std::move(u), Provenance{seed, generator});
}

void save_unitary(const std::filesystem::path& path, const Interferometer& interferometer) {
  if (path.extension() == ".json") {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path.string());
    out << unitary_to_json(interferometer).dump() << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  write_unitary_binary(out, interferometer);
}

Interferometer load_unitary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  const bool binary = in.gcount() == 8 && magic == kUnitaryMagic;
  in.clear();
  in.seekg(0);
  if (binary) return read_unitary_binary(in);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("unitary file " + path.string() + ": " + e.what());
  }
  return unitary_from_json(j);
}

nlohmann::json outcome_record(const DetectionOutcome& outcome, double probability,
                              double perm_modulus, std::uint64_t seed,
                              std::string_view config_hash) {
  return {{"mode", std::string(to_string(outcome.domain))},
          {"ports", outcome.ports},
          {"bins", outcome.bins},
          {"probability", probability},
          {"perm_modulus", perm_modulus},
          {"seed", seed},
          {"config_hash", std::string(config_hash)}};
}

nlohmann::json sample_record_to_json(const SampleRecord& record,
                                     std::string_view config_hash) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : record.inner_modes) modes.push_back(to_json(m));
  nlohmann::json j = {{"index", record.index},
                      {"seed", record.seed},
                      {"config_hash", std::string(config_hash)},
                      {"status", std::string(to_string(record.status))},
                      {"input_ports", record.input_ports},
                      {"inner_mode_indices", record.inner_mode_indices},
                      {"inner_modes", std::move(modes)},
                      {"n_total", record.n_total},
                      {"emitted_photons", record.emitted_photons}};
  if (record.outcome) {
    j["outcome"] = {{"mode", std::string(to_string(record.outcome->domain))},
                    {"ports", record.outcome->ports},
                    {"bins", record.outcome->bins},
                    {"values", record.outcome->resolved_values()}};
    j["probability"] = record.probability;
    j["perm_modulus"] = record.perm_modulus;
  } else {
    j["outcome"] = nullptr;
    j["probability"] = nullptr;
    j["perm_modulus"] = nullptr;
  }
  return j;
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(std::begin(buffer), std::end(buffer), value);
  return std::string(buffer, result.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw DomainError("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace smbcs
