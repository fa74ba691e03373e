#include "lpflow/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lpflow/errors.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

namespace {

constexpr char kMagic[4] = {'L', 'P', 'F', '1'};
constexpr std::uint8_t kVersion = 1;

template <class T>
void put_le(std::vector<char>& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get_le(const char* p) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void put_f64(std::vector<char>& out, double x) { put_le(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(const char* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

void write_bytes(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("write failed for " + path.string());
}

void write_impl(const std::vector<const GridField*>& comps, FieldKind kind, const std::filesystem::path& path) {
  const Grid& g = comps.front()->grid();
  std::vector<char> out;
  out.reserve(16 + comps.size() * g.size() * 16);
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(static_cast<char>(kVersion));
  out.push_back(static_cast<char>(kind));
  out.push_back(static_cast<char>(g.dim()));
  out.push_back(0);
  for (int a = 0; a < g.dim(); ++a) put_le(out, static_cast<std::uint32_t>(g.n()));
  for (const auto* c : comps)
    for (const auto& x : c->values()) {
      put_f64(out, x.real());
      put_f64(out, x.imag());
    }
  write_bytes(path, out);
}

bool looks_real(const std::vector<cplx>& v, Rep rep, const Grid& g) {
  if (rep == Rep::physical) {
    for (const auto& x : v)
      if (x.imag() != 0.0) return false;
    return true;
  }
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i] - std::conj(v[g.conjugate_index(i)])) > 1e-12 * scale) return false;
  return true;
}

}  // namespace

void write_field(const GridField& f, const std::filesystem::path& path) {
  write_impl({&f}, f.rep() == Rep::physical ? FieldKind::scalar_physical : FieldKind::scalar_spectral, path);
}

void write_field(const VectorField& u, const std::filesystem::path& path) {
  std::vector<const GridField*> comps;
  const Rep rep = u[0].rep();
  std::vector<GridField> converted;
  converted.reserve(u.components.size());
  for (const auto& c : u.components) {
    converted.push_back(rep == Rep::physical ? to_physical(c) : to_spectral(c));
    comps.push_back(&converted.back());
  }
  write_impl(comps, rep == Rep::physical ? FieldKind::vector_physical : FieldKind::vector_spectral, path);
}

StoredField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic in " + path.string());
  if (static_cast<std::uint8_t>(bytes[4]) != kVersion) throw FormatError("unsupported LPF version");
  const auto kind_byte = static_cast<std::uint8_t>(bytes[5]);
  if (kind_byte > 3) throw FormatError("unknown field kind " + std::to_string(kind_byte));
  const int d = static_cast<std::uint8_t>(bytes[6]);
  if (d != 2 && d != 3) throw FormatError("dimension mismatch: d=" + std::to_string(d));
  const std::size_t header = 8 + 4 * static_cast<std::size_t>(d);
  if (bytes.size() < header) throw FormatError("truncated header");
  const auto n = get_le<std::uint32_t>(bytes.data() + 8);
  for (int a = 1; a < d; ++a)
    if (get_le<std::uint32_t>(bytes.data() + 8 + 4 * a) != n) throw FormatError("dimension mismatch: unequal axis sizes");
  Grid g;
  try {
    g = Grid(d, static_cast<int>(n));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("dimension mismatch: ") + e.what());
  }
  const auto kind = static_cast<FieldKind>(kind_byte);
  const bool vector = kind == FieldKind::vector_physical || kind == FieldKind::vector_spectral;
  const Rep rep = (kind == FieldKind::scalar_physical || kind == FieldKind::vector_physical) ? Rep::physical : Rep::spectral;
  const std::size_t ncomp = vector ? static_cast<std::size_t>(d) : 1;
  const std::size_t expected = header + ncomp * g.size() * 16;
  if (bytes.size() < expected) throw FormatError("truncated payload in " + path.string());
  if (bytes.size() > expected) throw FormatError("trailing bytes after payload in " + path.string());

  std::vector<GridField> comps;
  const char* p = bytes.data() + header;
  for (std::size_t c = 0; c < ncomp; ++c) {
    std::vector<cplx> v(g.size());
    for (auto& x : v) {
      x = cplx(get_f64(p), get_f64(p + 8));
      p += 16;
    }
    const bool real = looks_real(v, rep, g);
    comps.emplace_back(g, rep, std::move(v), real);
  }
  if (!vector) return std::move(comps.front());
  VectorField u(std::move(comps), false);
  u.div_free = is_div_free(u);
  return u;
}

GridField read_scalar_field(const std::filesystem::path& path) {
  auto stored = read_field(path);
  if (auto* f = std::get_if<GridField>(&stored)) return std::move(*f);
  throw FormatError("expected a scalar field in " + path.string());
}

VectorField read_vector_field(const std::filesystem::path& path) {
  auto stored = read_field(path);
  if (auto* u = std::get_if<VectorField>(&stored)) return std::move(*u);
  throw FormatError("expected a vector field in " + path.string());
}

}  // namespace lpflow
