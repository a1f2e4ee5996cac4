#include "corrgeo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "corrgeo/errors.hpp"

namespace corrgeo {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& raw, const std::string& where) {
  const std::string s = strip(raw);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("cannot parse '" + raw + "' as a number at " + where);
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!strip(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::string format_17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LoadedMatrix read_matrix(const std::filesystem::path& path,
                         bool shrink_allowed) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty())
    throw ParseError("matrix file '" + path.string() + "' is empty");
  const int n = static_cast<int>(lines.size());
  Eigen::MatrixXd A(n, n);
  for (int r = 0; r < n; ++r) {
    const std::vector<std::string> fields = split_csv_line(lines[r]);
    if (static_cast<int>(fields.size()) != n)
      throw ParseError("row " + std::to_string(r + 1) + " of '" +
                       path.string() + "' has " +
                       std::to_string(fields.size()) + " values, expected " +
                       std::to_string(n));
    for (int c = 0; c < n; ++c)
      A(r, c) = parse_double(
          fields[c], "row " + std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1) + " of '" + path.string() +
                         "'");
  }

  std::vector<std::string> warnings;
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-15)
    warnings.push_back("'" + path.string() + "': symmetrized (max asymmetry " +
                       format_17(asym) + ")");
  const double diag_dev = (A.diagonal().array() - 1.0).abs().maxCoeff();
  if (diag_dev > 1e-12)
    warnings.push_back("'" + path.string() +
                       "': diagonal renormalized (max deviation " +
                       format_17(diag_dev) + ")");

  ValidationOutcome out = validate_or_shrink(A, shrink_allowed);
  if (out.shrink_gamma > 0.0)
    warnings.push_back("'" + path.string() + "': shrinkage applied, gamma = " +
                       format_17(out.shrink_gamma));
  return {std::move(out.matrix), out.shrink_gamma, std::move(warnings)};
}

void write_matrix_csv(const Eigen::MatrixXd& matrix,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MissingFile("cannot write '" + path.string() + "'");
  for (int r = 0; r < matrix.rows(); ++r) {
    for (int c = 0; c < matrix.cols(); ++c) {
      if (c) out << ',';
      out << format_17(matrix(r, c));
    }
    out << '\n';
  }
}

LoadedCohort read_manifest(const std::filesystem::path& path,
                           bool shrink_allowed) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty())
    throw ParseError("manifest '" + path.string() + "' is empty");
  if (strip(lines[0]) != "subject_id,matrix_path,label,age")
    throw ParseError("manifest '" + path.string() +
                     "' must start with header "
                     "'subject_id,matrix_path,label,age'");

  const std::filesystem::path base = path.parent_path();
  LoadedCohort out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split_csv_line(lines[r]);
    if (fields.size() != 4)
      throw ParseError("manifest row " + std::to_string(r + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected 4");
    const std::string id = strip(fields[0]);
    if (id.empty())
      throw ParseError("manifest row " + std::to_string(r + 1) +
                       " has an empty subject_id");
    const std::filesystem::path matrix_path = base / strip(fields[1]);
    if (!std::filesystem::exists(matrix_path))
      throw MissingFile("matrix file '" + matrix_path.string() +
                        "' for subject '" + id + "' does not exist");
    LoadedMatrix loaded = read_matrix(matrix_path, shrink_allowed);
    for (auto& w : loaded.warnings) out.warnings.push_back(std::move(w));

    std::optional<GroupLabel> label;
    const std::string label_str = strip(fields[2]);
    if (label_str == "A") {
      label = GroupLabel::A;
    } else if (label_str == "B") {
      label = GroupLabel::B;
    } else if (!label_str.empty()) {
      throw ParseError("subject '" + id + "': label must be A, B or empty");
    }

    std::optional<double> age;
    const std::string age_str = strip(fields[3]);
    if (!age_str.empty())
      age = parse_double(age_str, "age of subject '" + id + "'");

    out.cohort.subjects.push_back(
        {id, std::move(loaded.matrix), label, age});
  }
  out.cohort.validate();
  return out;
}

void write_cohort(const CohortDataset& cohort,
                  const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  std::ofstream manifest(directory / "manifest.csv");
  if (!manifest)
    throw MissingFile("cannot write manifest in '" + directory.string() + "'");
  manifest << "subject_id,matrix_path,label,age\n";
  for (const auto& s : cohort.subjects) {
    const std::string file = s.id + ".csv";
    write_matrix_csv(s.matrix.matrix(), directory / file);
    manifest << s.id << ',' << file << ','
             << (s.label ? std::string(1, static_cast<char>(*s.label)) : "")
             << ',' << (s.age ? format_17(*s.age) : "") << '\n';
  }
}

namespace {

void dump_value(const nlohmann::json& v, std::string& out) {
  switch (v.type()) {
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        out += format_17(d);
      } else {
        out += "null";
      }
      break;
    }
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump_value(it.value(), out);
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        dump_value(v[i], out);
      }
      out += ']';
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json_17(const nlohmann::json& doc) {
  std::string out;
  dump_value(doc, out);
  out += '\n';
  return out;
}

}  // namespace corrgeo
