#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smbcs/errors.hpp"
#include "smbcs/io.hpp"

using namespace smbcs;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "smbcs_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("spectral mode JSON round trip") {
  const SpectralMode m(1.5e15, -2.5e-12, 3.1e11, SpectralShape::RectangularTemporal);
  const auto j = to_json(m);
  CHECK(j.at("omega_c") == 1.5e15);
  CHECK(j.at("t_c") == -2.5e-12);
  CHECK(j.at("delta_omega") == 3.1e11);
  CHECK(j.at("shape") == "rectangular_temporal");
  CHECK(spectral_mode_from_json(nlohmann::json::parse(j.dump())) == m);
  CHECK_THROWS_AS(spectral_mode_from_json({{"omega_c", 1.0}}), DomainError);
  CHECK_THROWS_AS(spectral_mode_from_json(
                      {{"omega_c", 1.0}, {"t_c", 0.0}, {"delta_omega", -1.0}, {"shape", "rectangular_frequency"}}),
                  DomainError);
}

TEST_CASE("unitary round trips are exact") {
  const auto u = haar_random(9, 314);
  const auto from_json = unitary_from_json(nlohmann::json::parse(unitary_to_json(u).dump()));
  CHECK(from_json.matrix() == u.matrix());
  CHECK(from_json.provenance()->seed == 314);
  CHECK(from_json.provenance()->generator == "philox4x32-10");

  std::stringstream buffer;
  write_unitary_binary(buffer, u);
  CHECK(buffer.str().size() == 8 + 8 + 8 + 4 + 13 + 2 * 81 * 8);
  const auto from_binary = read_unitary_binary(buffer);
  CHECK(from_binary.matrix() == u.matrix());
  CHECK(unitarity_defect(from_binary.matrix()) <= 1e-12);

  for (const char* name : {"u.json", "u.bin"}) {
    const auto path = scratch(name);
    save_unitary(path, u);
    const auto loaded = load_unitary(path);
    CHECK(loaded.matrix() == u.matrix());
    CHECK(max_abs_diff(loaded.matrix(), u.matrix()) <= 1e-14);
  }
}

TEST_CASE("binary layout is little-endian interleaved") {
  const auto c = balanced_coupler();
  std::stringstream buffer;
  write_unitary_binary(buffer, c);
  const std::string bytes = buffer.str();
  CHECK(bytes.substr(0, 8) == "SMBCSU01");
  std::uint64_t m = 0;
  std::memcpy(&m, bytes.data() + 8, 8);
  CHECK(m == 2);
  std::uint32_t name_length = 0;
  std::memcpy(&name_length, bytes.data() + 24, 4);
  const std::size_t data_offset = 28 + name_length;
  double values[8];
  std::memcpy(values, bytes.data() + data_offset, sizeof values);
  CHECK(values[0] == c(0, 0).real());
  CHECK(values[1] == c(0, 0).imag());
  CHECK(values[6] == c(1, 1).real());
}

TEST_CASE("corrupt unitary files are rejected") {
  std::stringstream bad("NOTMAGIC");
  CHECK_THROWS_AS(read_unitary_binary(bad), DomainError);

  std::stringstream truncated;
  write_unitary_binary(truncated, haar_random(3, 1));
  std::stringstream cut(truncated.str().substr(0, 60));
  CHECK_THROWS_AS(read_unitary_binary(cut), DomainError);

  auto j = unitary_to_json(haar_random(2, 1));
  j["data"][0] = 5.0;
  CHECK_THROWS_AS(unitary_from_json(j), DomainError);
  j["data"] = nlohmann::json::array({1.0});
  CHECK_THROWS_AS(unitary_from_json(j), DomainError);

  const auto path = scratch("garbage.json");
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_unitary(path), DomainError);
  CHECK_THROWS_AS(load_unitary(scratch("missing.bin")), DomainError);
}

TEST_CASE("outcome and sample records") {
  const DetectionGrid grid(0.0, 0.5, 2);
  const DetectionOutcome out{ResolvedDomain::Frequency, {0, 3}, {1, 0}, grid};
  const auto j = outcome_record(out, 0.125, 0.7, 42, "abc");
  CHECK(j.at("mode") == "frequency");
  CHECK(j.at("ports") == nlohmann::json::array({0, 3}));
  CHECK(j.at("bins") == nlohmann::json::array({1, 0}));
  CHECK(j.at("probability") == 0.125);
  CHECK(j.at("perm_modulus") == 0.7);
  CHECK(j.at("seed") == 42);
  CHECK(j.at("config_hash") == "abc");

  SampleRecord failed;
  failed.index = 3;
  failed.seed = 9;
  const auto f = sample_record_to_json(failed, "h");
  CHECK(f.at("status") == "failed");
  CHECK(f.at("outcome").is_null());

  SampleRecord complete = failed;
  complete.status = SampleStatus::Complete;
  complete.input_ports = {0, 1};
  complete.outcome = out;
  complete.probability = 0.25;
  const auto c = sample_record_to_json(complete, "h");
  CHECK(c.at("outcome").at("values") == nlohmann::json::array({0.75, 0.25}));
  CHECK(c.at("probability") == 0.25);
}

TEST_CASE("csv writer and number formatting") {
  std::ostringstream out;
  CsvWriter csv(out, {"a", "b"});
  csv.row({"1", format_double(0.1)});
  CHECK(out.str() == "a,b\n1,0.1\n");
  CHECK_THROWS_AS(csv.row({"1"}), DomainError);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}
