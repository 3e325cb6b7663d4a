#include "specfact/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace specfact {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& doc, const char* field) {
  if (!doc.contains(field)) {
    fail(ErrorCode::ParseError, std::string("missing field ") + field);
  }
  const json& rows = doc.at(field);
  if (!rows.is_array() || rows.empty()) {
    fail(ErrorCode::ParseError,
         std::string(field) + " must be a non-empty array of rows");
  }
  const std::size_t row_count = rows.size();
  std::size_t col_count = 0;
  Matrix m;
  for (std::size_t i = 0; i < row_count; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || row.empty()) {
      std::ostringstream oss;
      oss << field << "[" << i << "] must be a non-empty array of numbers";
      fail(ErrorCode::ParseError, oss.str());
    }
    if (i == 0) {
      col_count = row.size();
      m.resize(row_count, col_count);
    } else if (row.size() != col_count) {
      std::ostringstream oss;
      oss << field << "[" << i << "]: expected " << col_count
          << " entries, got " << row.size();
      fail(ErrorCode::ParseError, oss.str());
    }
    for (std::size_t j = 0; j < col_count; ++j) {
      const json& entry = row.at(j);
      if (!entry.is_number()) {
        std::ostringstream oss;
        oss << field << "[" << i << "][" << j << "]: expected a number";
        fail(ErrorCode::ParseError, oss.str());
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          entry.get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_list_to_json(const std::vector<Complex>& values) {
  json list = json::array();
  for (const auto& v : values) {
    list.push_back(json::array({v.real(), v.imag()}));
  }
  return list;
}

}  // namespace

StateSpaceModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) {
    fail(ErrorCode::ParseError, "top level must be an object");
  }
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (key != "A" && key != "B" && key != "C" && key != "D") {
      fail(ErrorCode::ParseError, "unexpected field " + key);
    }
  }
  StateSpaceModel m;
  m.A = parse_matrix(doc, "A");
  m.B = parse_matrix(doc, "B");
  m.C = parse_matrix(doc, "C");
  m.D = parse_matrix(doc, "D");
  validate_dimensions(m);
  return m;
}

std::string model_to_json(const StateSpaceModel& m) {
  json doc;
  doc["A"] = matrix_to_json(m.A);
  doc["B"] = matrix_to_json(m.B);
  doc["C"] = matrix_to_json(m.C);
  doc["D"] = matrix_to_json(m.D);
  return doc.dump(2) + "\n";
}

StateSpaceModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::IoError, "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  const std::filesystem::path parent = path.parent_path();
  std::error_code ec;
  if (!parent.empty()) {
    std::filesystem::create_directories(parent, ec);
    if (ec) {
      fail(ErrorCode::IoError,
           "cannot create directory " + parent.string() + ": " + ec.message());
    }
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      fail(ErrorCode::IoError, "cannot write " + tmp.string());
    }
    out << text;
    out.flush();
    if (!out) {
      fail(ErrorCode::IoError, "write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    fail(ErrorCode::IoError,
         "cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

void save_model_atomic(const std::filesystem::path& path,
                       const StateSpaceModel& m) {
  write_text_atomic(path, model_to_json(m));
}

std::string report_to_json(const FlipReport& report) {
  json doc;
  doc["spectral_error"] = report.spectral_error;
  doc["riccati_residuals"] = json::object();
  for (const auto& [name, value] : report.riccati_residuals) {
    doc["riccati_residuals"][name] = value;
  }
  doc["poles"] = complex_list_to_json(report.pole_multiset);
  doc["zeros"] = complex_list_to_json(report.zero_multiset);
  if (report.diagram_error) {
    doc["diagram_error"] = *report.diagram_error;
  }
  doc["verdict"] = report.pass ? "pass" : "fail";
  doc["failures"] = report.failures;
  return doc.dump(2) + "\n";
}

}  // namespace specfact
