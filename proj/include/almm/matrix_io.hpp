#ifndef ALMM_MATRIX_IO_HPP_
#define ALMM_MATRIX_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "almm/metrics.hpp"
#include "almm/types.hpp"

namespace almm {

/// Binary matrix container: magic "ALMM", u32 version (1), u32 rows,
/// u32 cols, then rows*cols little-endian f64 in row-major order.
/// Writes go through a temp file and a rename so readers never see a
/// partial file.
void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

/// Plain-text interchange: one row per line, comma-separated.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// 8-bit binary PGM (P5). Values map linearly [lo, hi] -> [0, 255] with
/// flooring and out-of-range clamping; values holds one pixel per entry
/// in row-major order.
void write_pgm(const std::filesystem::path& path, const Vector& values,
               int rows, int cols, double lo, double hi);

/// Evaluation report rows (run_id, algorithm, aRMSE, rRMSE, aSAM, OA,
/// wall_ms) with a header line.
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

/// Integer labels, one per line; -1 is the masked-out sentinel.
void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<int>& labels);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

/// Whole-file atomic text write (temp + rename).
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace almm

#endif  // ALMM_MATRIX_IO_HPP_
