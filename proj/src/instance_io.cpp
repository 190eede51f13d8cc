#include "grppa/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace grppa::lvggms {
namespace {

constexpr const char* kMagic = "grppa-lvggms-instance";
constexpr const char* kRefMagic = "grppa-reference";
constexpr int kVersion = 1;

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(const std::string& what) {
  throw std::runtime_error("instance file: " + what);
}

template <typename T>
T expect_field(std::istream& is, const char* key) {
  std::string name;
  if (!(is >> name) || name != key) parse_error(std::string("expected '") + key + "'");
  T value;
  if (!(is >> value)) parse_error(std::string("bad value for '") + key + "'");
  return value;
}

std::optional<std::string> optional_token(std::istream& is, const char* key) {
  const auto token = expect_field<std::string>(is, key);
  if (token == "none") return std::nullopt;
  return token;
}

}  // namespace

void write_instance(std::ostream& os, const Instance& instance) {
  const Eigen::Index n = instance.n();
  os << kMagic << ' ' << kVersion << '\n';
  os << "n " << n << '\n';
  os << "nu " << exact(instance.nu) << '\n';
  os << "mu " << exact(instance.mu) << '\n';
  os << "seed " << (instance.seed ? std::to_string(*instance.seed) : "none") << '\n';
  os << "density " << (instance.density ? exact(*instance.density) : "none") << '\n';
  os << "C\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) os << ' ';
      os << exact(instance.C(i, j));
    }
    os << '\n';
  }
}

Instance read_instance(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kMagic) parse_error("missing header");
  if (version != kVersion) parse_error("unsupported version " + std::to_string(version));
  const auto n = expect_field<long>(is, "n");
  if (n < 1) parse_error("n must be positive");
  const auto nu = expect_field<double>(is, "nu");
  const auto mu = expect_field<double>(is, "mu");
  const auto seed = optional_token(is, "seed");
  const auto density = optional_token(is, "density");
  std::string tag;
  if (!(is >> tag) || tag != "C") parse_error("expected 'C'");
  Eigen::MatrixXd c(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (!(is >> c(i, j))) parse_error("truncated matrix data");
    }
  }
  Instance inst;
  try {
    inst = make_instance(std::move(c), nu, mu);
  } catch (const std::invalid_argument& e) {
    parse_error(e.what());
  }
  if (seed) inst.seed = std::stoull(*seed);
  if (density) inst.density = std::stod(*density);
  return inst;
}

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_instance(os, instance);
  if (!os) throw std::runtime_error("error writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_instance(is);
}

std::filesystem::path reference_path(const std::filesystem::path& instance_path) {
  return std::filesystem::path(instance_path.string() + ".fstar");
}

void save_reference(const std::filesystem::path& instance_path, const Reference& ref) {
  const auto path = reference_path(instance_path);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << kRefMagic << ' ' << kVersion << '\n'
     << "iterations " << ref.iterations << '\n'
     << "objective " << exact(ref.objective) << '\n';
}

std::optional<Reference> load_reference(const std::filesystem::path& instance_path, long iterations) {
  std::ifstream is(reference_path(instance_path), std::ios::binary);
  if (!is) return std::nullopt;
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kRefMagic || version != kVersion) return std::nullopt;
  Reference ref;
  try {
    ref.iterations = expect_field<long>(is, "iterations");
    ref.objective = expect_field<double>(is, "objective");
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
  if (ref.iterations != iterations) return std::nullopt;
  return ref;
}

}  // namespace grppa::lvggms
