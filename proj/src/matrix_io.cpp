#include "hjac/matrix_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hjac {

static_assert(std::endian::native == std::endian::little,
              "binary matrix I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 4> kMagic = {'H', 'J', 'A', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr char kTextTag[] = "hjac-text";

template <typename U>
void put(std::ostream& out, U value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(U));
}

template <typename U>
U get(std::istream& in, const std::string& path) {
  U value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(U))) {
    throw InputError(path + ": truncated header");
  }
  return value;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) {
    throw InputError("cannot open '" + path + "' for writing");
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& token, const std::string& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size()) {
    throw InputError(path + ": bad number '" + token + "'");
  }
  return v;
}

complex128 parse_complex(const std::string& token, const std::string& path) {
  if (token.size() < 5 || token.front() != '(' || token.back() != ')') {
    throw InputError(path + ": bad complex entry '" + token + "'");
  }
  const std::string body = token.substr(1, token.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string::npos) {
    throw InputError(path + ": bad complex entry '" + token + "'");
  }
  return {parse_real(body.substr(0, comma), path),
          parse_real(body.substr(comma + 1), path)};
}

template <Scalar T>
AnyMatrix read_binary_payload(std::istream& in, std::uint64_t rows,
                              std::uint64_t cols, const std::string& path) {
  if (rows > (1ULL << 32) || cols > (1ULL << 32)) {
    throw InputError(path + ": implausible dimensions");
  }
  DenseMatrix<T> m(rows, cols);
  const auto bytes = static_cast<std::streamsize>(rows * cols * sizeof(T));
  if (bytes > 0 && !in.read(reinterpret_cast<char*>(m.data()), bytes)) {
    throw InputError(path + ": truncated payload");
  }
  return m;
}

template <Scalar T>
AnyMatrix read_text_payload(std::istream& in, std::size_t rows,
                            std::size_t cols, const std::string& path) {
  DenseMatrix<T> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::string token;
      if (!(in >> token)) {
        throw InputError(path + ": truncated text payload");
      }
      if constexpr (is_complex_v<T>) {
        m(i, j) = parse_complex(token, path);
      } else {
        m(i, j) = parse_real(token, path);
      }
    }
  }
  std::string extra;
  if (in >> extra) {
    throw InputError(path + ": trailing data after the matrix");
  }
  return m;
}

}  // namespace

void write_matrix(const std::string& path, const AnyMatrix& any) {
  std::ofstream out = open_out(path, std::ios::binary | std::ios::trunc);
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  std::visit(
      [&](const auto& m) {
        using T = typename std::decay_t<decltype(m)>::value_type;
        put<std::uint32_t>(out, is_complex_v<T> ? 1U : 0U);
        put<std::uint64_t>(out, m.rows());
        put<std::uint64_t>(out, m.cols());
        out.write(reinterpret_cast<const char*>(m.data()),
                  static_cast<std::streamsize>(m.rows() * m.cols() * sizeof(T)));
      },
      any);
  if (!out) {
    throw InputError("write to '" + path + "' failed");
  }
}

void write_matrix_text(const std::string& path, const AnyMatrix& any) {
  std::ofstream out = open_out(path, std::ios::trunc);
  std::visit(
      [&](const auto& m) {
        using T = typename std::decay_t<decltype(m)>::value_type;
        out << kTextTag << ' ' << (is_complex_v<T> ? "complex" : "real") << ' '
            << m.rows() << ' ' << m.cols() << '\n';
        for (std::size_t i = 0; i < m.rows(); ++i) {
          for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) {
              out << ' ';
            }
            if constexpr (is_complex_v<T>) {
              out << '(' << format_real(m(i, j).real()) << ','
                  << format_real(m(i, j).imag()) << ')';
            } else {
              out << format_real(m(i, j));
            }
          }
          out << '\n';
        }
      },
      any);
  if (!out) {
    throw InputError("write to '" + path + "' failed");
  }
}

AnyMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  char head[4] = {};
  if (!in.read(head, 4)) {
    throw InputError(path + ": file too short for a header");
  }
  if (std::memcmp(head, kMagic.data(), 4) == 0) {
    const auto version = get<std::uint32_t>(in, path);
    if (version != kVersion) {
      throw InputError(path + ": unknown format version " +
                       std::to_string(version));
    }
    const auto kind = get<std::uint32_t>(in, path);
    const auto rows = get<std::uint64_t>(in, path);
    const auto cols = get<std::uint64_t>(in, path);
    AnyMatrix m;
    if (kind == 0) {
      m = read_binary_payload<double>(in, rows, cols, path);
    } else if (kind == 1) {
      m = read_binary_payload<complex128>(in, rows, cols, path);
    } else {
      throw InputError(path + ": unknown scalar kind " + std::to_string(kind));
    }
    if (in.peek() != std::char_traits<char>::eof()) {
      throw InputError(path + ": trailing data after the payload");
    }
    return m;
  }

  in.clear();
  in.seekg(0);
  std::string tag;
  std::string kind;
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> tag) || tag != kTextTag) {
    throw InputError(path + ": not a matrix file (bad magic)");
  }
  if (!(in >> kind >> rows >> cols) || (kind != "real" && kind != "complex")) {
    throw InputError(path + ": malformed text header");
  }
  if (kind == "real") {
    return read_text_payload<double>(in, rows, cols, path);
  }
  return read_text_payload<complex128>(in, rows, cols, path);
}

SignVector read_signs(const std::string& path) {
  const AnyMatrix any = read_matrix(path);
  const auto* m = std::get_if<DenseMatrix<double>>(&any);
  if (m == nullptr) {
    throw InputError(path + ": sign file must hold a real matrix");
  }
  if (m->rows() != 1 && m->cols() != 1) {
    throw InputError(path + ": sign file must hold a single row or column");
  }
  std::vector<int> signs;
  for (double v : m->storage()) {
    if (v != 1.0 && v != -1.0) {
      throw InputError(path + ": sign entries must be +1 or -1");
    }
    signs.push_back(v > 0.0 ? 1 : -1);
  }
  return SignVector(std::move(signs));
}

void write_values(const std::string& path, const std::vector<double>& values) {
  std::ofstream out = open_out(path, std::ios::trunc);
  for (double v : values) {
    out << format_real(v) << '\n';
  }
  if (!out) {
    throw InputError("write to '" + path + "' failed");
  }
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    values.push_back(parse_real(token, path));
  }
  return values;
}

}  // namespace hjac
