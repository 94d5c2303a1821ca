#include "ncdil/theta_file.hpp"

#include "ncdil/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>

namespace ncdil {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      tokens.push_back({line.substr(start, i - start), line_no, static_cast<int>(start) + 1});
    }
  }
  return tokens;
}

[[noreturn]] void fail(const std::string& source, const Token& t, const std::string& what) {
  throw UsageError(source + ":" + std::to_string(t.line) + ":" + std::to_string(t.column) + ": " + what +
                   " '" + t.text + "'");
}

template <class T>
std::optional<T> parse_whole(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

ThetaFile parse_theta(std::istream& in, const std::string& source) {
  const std::vector<Token> tokens = tokenize(in);
  if (tokens.empty()) throw UsageError(source + ": empty theta file");
  const auto d = parse_whole<int>(tokens.front().text);
  if (!d || *d < 1) fail(source, tokens.front(), "expected a positive dimension, got");
  if (tokens.front().column != 1 || (tokens.size() > 1 && tokens[1].line == tokens.front().line))
    fail(source, tokens.front(), "the dimension must stand alone on the first line, got");

  ThetaFile out;
  const std::size_t expected = static_cast<std::size_t>(*d) * (*d - 1) / 2;
  const std::size_t given = tokens.size() - 1;
  if (given == 0) {
    out.theta = ThetaMatrix::zero(*d);
    return out;
  }
  if (given != expected)
    fail(source, tokens.back(),
         "expected " + std::to_string(expected) + " upper-triangle entries, found " + std::to_string(given) +
             "; last token");

  std::vector<RationalAngle> rational;
  std::vector<double> radians;
  bool all_rational = true;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    const auto slash = t.text.find('/');
    if (slash != std::string::npos) {
      const auto m = parse_whole<long long>(std::string_view(t.text).substr(0, slash));
      const auto n = parse_whole<long long>(std::string_view(t.text).substr(slash + 1));
      if (!m || !n) fail(source, t, "malformed fraction");
      if (*n <= 0) fail(source, t, "denominator must be positive in");
      const long long g = std::gcd(*m, *n);
      if (g > 1)
        out.warnings.push_back(source + ":" + std::to_string(t.line) + ":" + std::to_string(t.column) +
                               ": fraction '" + t.text + "' normalized to " + RationalAngle::make(*m, *n).str());
      const RationalAngle q = RationalAngle::make(*m, *n);
      rational.push_back(q);
      radians.push_back(q.radians());
    } else {
      const auto v = parse_whole<double>(t.text);
      if (!v || !std::isfinite(*v)) fail(source, t, "malformed token");
      all_rational = false;
      radians.push_back(*v);
    }
  }
  out.theta = all_rational ? ThetaMatrix::from_rational(*d, rational) : ThetaMatrix::from_radians(*d, radians);
  return out;
}

ThetaFile load_theta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open theta file '" + path + "'");
  return parse_theta(in, path);
}

}  // namespace ncdil
