#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "mckean/model.hpp"

namespace mckean {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_decimal(const std::string& tok) {
  std::string t;
  for (char c : tok)
    if (c != '_') t.push_back(c);
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw Error(ErrorCode::ParseError, "not a decimal literal: '" + tok + "'");
  for (char c : t)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E'))
      throw Error(ErrorCode::ParseError, "not a decimal literal: '" + tok + "'");
  return v;
}

std::vector<double> parse_array(const std::string& body) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;  // trailing comma
    out.push_back(parse_decimal(item));
  }
  return out;
}

// Minimal TOML reader: [table] headers, dotted keys, numeric arrays, # comments.
ModelFile parse_toml(const std::string& text) {
  std::map<std::string, std::vector<double>> arrays;
  std::istringstream in(text);
  std::string line, table;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ParseError, "bad table header at line " + std::to_string(lineno));
      table = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!table.empty()) key = table + "." + key;
    if (value.empty() || value.front() != '[')
      throw Error(ErrorCode::ParseError, "expected array value for '" + key + "'");
    while (value.find(']') == std::string::npos) {
      std::string more;
      if (!std::getline(in, more)) throw Error(ErrorCode::ParseError, "unterminated array for '" + key + "'");
      ++lineno;
      value += " " + trim(more.substr(0, more.find('#')));
    }
    const auto close = value.find(']');
    if (!trim(value.substr(close + 1)).empty())
      throw Error(ErrorCode::ParseError, "trailing characters after array for '" + key + "'");
    arrays[key] = parse_array(value.substr(1, close - 1));
  }
  ModelFile mf;
  auto take = [&](const std::string& k) {
    auto it = arrays.find(k);
    if (it == arrays.end()) throw Error(ErrorCode::ParseError, "missing key '" + k + "'");
    return it->second;
  };
  mf.V = take("V.coeffs");
  mf.F = take("F.coeffs");
  return mf;
}

ModelFile parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  auto take = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_object() || !j[name].contains("coeffs") || !j[name]["coeffs"].is_array())
      throw Error(ErrorCode::ParseError, std::string("missing ") + name + ".coeffs array");
    std::vector<double> v;
    for (const auto& x : j[name]["coeffs"]) {
      if (!x.is_number()) throw Error(ErrorCode::ParseError, std::string(name) + ".coeffs must hold numbers");
      v.push_back(x.get<double>());
    }
    return v;
  };
  return {take("V"), take("F")};
}

}  // namespace

ModelFile parse_model_document(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty model document");
  ModelFile mf = t.front() == '{' ? parse_json(t) : parse_toml(t);
  if (mf.V.empty() || mf.F.empty()) throw Error(ErrorCode::ParseError, "coefficient arrays must be nonempty");
  return mf;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_model_document(ss.str());
}

}  // namespace mckean
