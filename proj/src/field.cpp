#include "bec/field.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace bec {

long Grid::size() const {
  long s = 1;
  for (int d = 0; d < dim; ++d) s *= m;
  return s;
}

double Grid::k(int i) const {
  const int signed_freq = (i < (m + 1) / 2) ? i : i - m;
  return 2.0 * M_PI * signed_freq / length;
}

double Grid::min_image(double x) const {
  return x - length * std::round(x / length);
}

void Grid::validate() const {
  if (dim != 1 && dim != 3) throw Error("grid dimension must be 1 or 3");
  if (m < 2) throw Error("grid needs at least two points per axis");
  if (!(length > 0.0)) throw Error("grid length must be positive");
}

Field Field::zero(const Grid& g) {
  g.validate();
  Field f;
  f.grid = g;
  f.values = VectorXcd::Zero(g.size());
  return f;
}

Field Field::constant(const Grid& g, Complex value) {
  Field f = zero(g);
  f.values.setConstant(value);
  return f;
}

Field Field::plane_wave(const Grid& g, const std::array<int, 3>& mode) {
  Field f = zero(g);
  const double norm = 1.0 / std::sqrt(std::pow(g.length, g.dim));
  if (g.dim == 1) {
    const double k = 2.0 * M_PI * mode[0] / g.length;
    for (int i = 0; i < g.m; ++i) {
      f.values[i] = norm * std::exp(Complex(0.0, k * g.x(i)));
    }
  } else {
    long idx = 0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j)
        for (int l = 0; l < g.m; ++l, ++idx) {
          const double phase = 2.0 * M_PI *
                               (mode[0] * g.x(i) + mode[1] * g.x(j) + mode[2] * g.x(l)) /
                               g.length;
          f.values[idx] = norm * std::exp(Complex(0.0, phase));
        }
  }
  return f;
}

Field Field::sample(const Grid& g, const std::function<Complex(double, double, double)>& fn) {
  Field f = zero(g);
  if (g.dim == 1) {
    for (int i = 0; i < g.m; ++i) f.values[i] = fn(g.x(i), 0.0, 0.0);
  } else {
    long idx = 0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j)
        for (int l = 0; l < g.m; ++l, ++idx) f.values[idx] = fn(g.x(i), g.x(j), g.x(l));
  }
  return f;
}

double Field::mass() const {
  return values.squaredNorm() * std::pow(grid.h(), grid.dim);
}

Field& Field::normalize() {
  const double m = mass();
  if (m <= 0.0) throw Error("cannot normalize a zero field");
  values /= std::sqrt(m);
  return *this;
}

VectorXd sample_radial(const Grid& g, const std::function<double(double)>& radial) {
  VectorXd out(g.size());
  if (g.dim == 1) {
    for (int i = 0; i < g.m; ++i) out[i] = radial(std::abs(g.min_image(g.x(i))));
  } else {
    long idx = 0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j)
        for (int l = 0; l < g.m; ++l, ++idx) {
          const double dx = g.min_image(g.x(i));
          const double dy = g.min_image(g.x(j));
          const double dz = g.min_image(g.x(l));
          out[idx] = radial(std::sqrt(dx * dx + dy * dy + dz * dz));
        }
  }
  return out;
}

void save_field_csv(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "# dim,m,length\n";
  out << f.grid.dim << "," << f.grid.m << "," << f.grid.length << "\n";
  out << "re,im\n";
  for (long i = 0; i < f.values.size(); ++i) {
    out << f.values[i].real() << "," << f.values[i].imag() << "\n";
  }
}

Field load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);  // comment
  std::getline(in, line);
  Grid g;
  char comma;
  std::istringstream meta(line);
  meta >> g.dim >> comma >> g.m >> comma >> g.length;
  Field f = Field::zero(g);
  std::getline(in, line);  // header
  for (long i = 0; i < f.values.size(); ++i) {
    std::getline(in, line);
    std::istringstream row(line);
    double re, im;
    row >> re >> comma >> im;
    f.values[i] = Complex(re, im);
  }
  return f;
}

namespace {
constexpr uint32_t kFieldMagic = 0x42454346;  // "BECF"
}

void save_field_binary(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  uint32_t magic = kFieldMagic;
  int32_t dim = f.grid.dim, m = f.grid.m;
  double length = f.grid.length;
  out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&m), sizeof m);
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
}

Field load_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  uint32_t magic = 0;
  int32_t dim = 0, m = 0;
  double length = 0.0;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  if (magic != kFieldMagic) throw Error("not a field checkpoint: " + path);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  Field f = Field::zero(Grid{dim, m, length});
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
  if (!in) throw Error("truncated field checkpoint: " + path);
  return f;
}

}  // namespace bec
