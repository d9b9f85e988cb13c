#include "almm/matrix_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace almm {

static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'A', 'L', 'M', 'M'};
constexpr std::uint32_t kVersion = 1;

std::filesystem::path temp_name(const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  return tmp;
}

void commit(const std::filesystem::path& tmp,
            const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("rename failed for " + path.string() + ": " +
                    ec.message());
  }
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  const auto tmp = temp_name(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for write");
    out.write(kMagic, 4);
    const std::uint32_t version = kVersion;
    const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&rows), 4);
    out.write(reinterpret_cast<const char*>(&cols), 4);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double v = m(i, j);
        out.write(reinterpret_cast<const char*>(&v), 8);
      }
    }
    if (!out) throw DataError("short write to " + tmp.string());
  }
  commit(tmp, path);
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[4];
  std::uint32_t version = 0, rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError(path.string() + ": not an ALMM matrix file");
  }
  if (version != kVersion) {
    throw DataError(path.string() + ": unsupported version " +
                    std::to_string(version));
  }
  Matrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), 8);
      m(i, j) = v;
    }
  }
  if (!in) throw DataError(path.string() + ": truncated matrix payload");
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  write_text_atomic(path, out.str());
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError(path.string() + ": bad numeric cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path.string() + ": ragged CSV rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": empty CSV matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

void write_pgm(const std::filesystem::path& path, const Vector& values,
               int rows, int cols, double lo, double hi) {
  if (static_cast<long>(rows) * cols != values.size()) {
    throw ContractError("write_pgm: rows*cols vs values length");
  }
  if (!(hi > lo)) throw ContractError("write_pgm: lo vs hi (need lo < hi)");
  std::string body;
  body.reserve(static_cast<std::size_t>(values.size()) + 32);
  body += "P5\n" + std::to_string(cols) + " " + std::to_string(rows) +
          "\n255\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double t = (values[i] - lo) / (hi - lo) * 255.0;
    t = std::clamp(std::floor(t), 0.0, 255.0);
    body += static_cast<char>(static_cast<unsigned char>(t));
  }
  write_text_atomic(path, body);
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "run_id,algorithm,aRMSE,rRMSE,aSAM,OA,wall_ms\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.algorithm << ',' << r.armse << ','
        << r.rrmse << ',' << r.asam << ',' << r.oa << ',' << r.wall_ms
        << '\n';
  }
  write_text_atomic(path, out.str());
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": empty metrics CSV");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) {
      throw DataError(path.string() + ": expected 7 cells per metrics row");
    }
    MetricsRow r;
    r.run_id = cells[0];
    r.algorithm = cells[1];
    r.armse = std::stod(cells[2]);
    r.rrmse = std::stod(cells[3]);
    r.asam = std::stod(cells[4]);
    r.oa = std::stod(cells[5]);
    r.wall_ms = std::stod(cells[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<int>& labels) {
  std::ostringstream out;
  for (int v : labels) out << v << '\n';
  write_text_atomic(path, out.str());
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      labels.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw DataError(path.string() + ": bad label '" + line + "'");
    }
  }
  return labels;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  const auto tmp = temp_name(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for write");
    out.write(contents.data(),
              static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("short write to " + tmp.string());
  }
  commit(tmp, path);
}

}  // namespace almm
