#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "psdorder/linmodels.hpp"
#include "psdorder/matrix.hpp"

namespace psdorder::io {

enum class MatrixFormat { csv, json };

/// `.json` selects JSON ({"n": int, "entries": [[...]]}); anything else is CSV.
MatrixFormat format_for(const std::filesystem::path& path);

/// CSV: one row per line, comma-separated decimals, equal row lengths. Blank lines are skipped.
Matrix parse_csv(std::string_view text);
/// JSON: {"entries": [[...]]} with optional "n"; a bare array of rows is also accepted.
Matrix parse_json_matrix(std::string_view text);

/// Reads a general (possibly rectangular) matrix. Throws IoError / ParseError.
Matrix read_general_matrix(const std::filesystem::path& path);

/**
 * Reads a square matrix and symmetrizes it. When the relative asymmetry
 * exceeds `sym_tol` a warning naming the file goes to `warn`.
 */
SymMatrix read_matrix(const std::filesystem::path& path, std::ostream& warn, double sym_tol = 1e-12);

/// Reads a vector stored as a single row or a single column.
Vector read_vector(const std::filesystem::path& path);

/// 17 significant digits, so write-then-read reproduces every double.
std::string format_double(double v);
std::string to_csv(const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// {"label": str, "X": [[...]], "D": [[...]], "sigma2": number (default 1)}.
LinearModel parse_model(std::string_view text, std::ostream& warn, const ToleranceConfig& tol = {});
LinearModel read_model(const std::filesystem::path& path, std::ostream& warn, const ToleranceConfig& tol = {});

}  // namespace psdorder::io
