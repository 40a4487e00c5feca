#include "psdorder/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "psdorder/errors.hpp"

namespace psdorder::io {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("line " + std::to_string(line) + ": malformed number '" + std::string(token) + "'");
  if (!std::isfinite(v)) throw ParseError("line " + std::to_string(line) + ": non-finite value");
  return v;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ParseError("matrix has no rows");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  const json* rows = &j;
  if (j.is_object()) {
    if (!j.contains("entries")) throw ParseError(what + ": missing \"entries\"");
    rows = &j.at("entries");
  }
  if (!rows->is_array() || rows->empty()) throw ParseError(what + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& r : *rows) {
    if (!r.is_array()) throw ParseError(what + ": each row must be an array");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw ParseError(what + ": non-numeric entry");
      row.push_back(v.get<double>());
    }
    if (!out.empty() && row.size() != out.front().size()) throw ParseError(what + ": ragged rows");
    if (row.empty()) throw ParseError(what + ": empty row");
    out.push_back(std::move(row));
  }
  Matrix m = from_rows(out);
  if (j.is_object() && j.contains("n")) {
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() != static_cast<long long>(m.rows()))
      throw ParseError(what + ": \"n\" does not match the number of rows");
  }
  return m;
}

}  // namespace

MatrixFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? MatrixFormat::json : MatrixFormat::csv;
}

Matrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      row.push_back(parse_number(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("line " + std::to_string(line_no) + ": ragged rows (expected " +
                       std::to_string(rows.front().size()) + " columns, found " + std::to_string(row.size()) + ")");
    rows.push_back(std::move(row));
  }
  return from_rows(rows);
}

Matrix parse_json_matrix(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return matrix_from_json(j, "matrix");
}

Matrix read_general_matrix(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  try {
    return format_for(path) == MatrixFormat::json ? parse_json_matrix(text) : parse_csv(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

SymMatrix read_matrix(const std::filesystem::path& path, std::ostream& warn, double sym_tol) {
  const Matrix m = read_general_matrix(path);
  if (!m.square())
    throw ParseError(path.string() + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  const double asym = relative_asymmetry(m);
  if (asym > sym_tol)
    warn << "warning: " << path.string() << " is not symmetric (relative asymmetry " << asym
         << "); averaging with its transpose\n";
  return SymMatrix(m);
}

Vector read_vector(const std::filesystem::path& path) {
  const Matrix m = read_general_matrix(path);
  if (m.rows() == 1) return Vector(m.row(0).begin(), m.row(0).end());
  if (m.cols() == 1) return m.col(0);
  throw ParseError(path.string() + ": expected a single row or column");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  if (format_for(path) == MatrixFormat::json) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    out << json{{"n", m.rows()}, {"entries", rows}}.dump() << '\n';
  } else {
    out << to_csv(m);
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LinearModel parse_model(std::string_view text, std::ostream& warn, const ToleranceConfig& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("X") || !j.contains("D"))
    throw ParseError("model JSON needs \"X\" and \"D\"");
  const Matrix x = matrix_from_json(j.at("X"), "X");
  const Matrix d = matrix_from_json(j.at("D"), "D");
  if (!d.square()) throw ParseError("D must be square");
  const std::string label = j.value("label", std::string{});
  if (relative_asymmetry(d) > 1e-12)
    warn << "warning: model '" << label << "': D is not symmetric; averaging with its transpose\n";
  double sigma2 = 1.0;
  if (j.contains("sigma2")) {
    if (!j.at("sigma2").is_number()) throw ParseError("sigma2 must be a number");
    sigma2 = j.at("sigma2").get<double>();
  }
  LinearModel model{x, PsdMatrix::certify(SymMatrix(d), tol), sigma2, label};
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  return model;
}

LinearModel read_model(const std::filesystem::path& path, std::ostream& warn, const ToleranceConfig& tol) {
  try {
    return parse_model(slurp(path), warn, tol);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace psdorder::io
