#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "flatclass/canonical.hpp"
#include "flatclass/linear.hpp"
#include "flatclass/matroid.hpp"

namespace flatclass {

using Json = nlohmann::ordered_json;

/// One matroid as it appears in a file: a basis list, a GF(q) matrix, or a
/// name expression such as "U(2,3)+U(1,1)".
struct MatroidRecord {
  enum class Format { Bases, Matrix, Name };

  Format format = Format::Bases;
  int n = 0;
  int rank = 0;
  std::vector<SubsetMask> bases;
  GFMatrix matrix;
  std::string expr;
};

inline char element_char(ElementId e) { return static_cast<char>(e < 10 ? '0' + e : 'a' + (e - 10)); }

inline int element_from_char(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

/// "013" for {0,1,3}
inline std::string tuple_string(SubsetMask s) {
  std::string out;
  for (ElementId e : elements_of(s)) out += element_char(e);
  return out;
}

/// Bases as tuple strings in lexicographic order.
inline std::vector<std::string> basis_tuples(const Matroid& m) {
  std::vector<std::string> out;
  for (SubsetMask b : m.bases()) out.push_back(tuple_string(b));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Name expressions: expr := term ('+' term)*;  term := U(r,n) | PG(d,q) | '(' expr ')'

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, std::string source, int line)
      : text_(text), source_(std::move(source)), line_(line) {}

  Matroid parse() {
    Matroid m = expr();
    skip_space();
    if (pos_ != text_.size()) fail("expected '+' or end of expression");
    return m;
  }

 private:
  Matroid expr() {
    Matroid m = term();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        ++pos_;
        m = direct_sum(m, term());
      } else {
        return m;
      }
    }
  }

  Matroid term() {
    skip_space();
    if (consume("(")) {
      Matroid m = expr();
      expect(")");
      return m;
    }
    if (consume("PG")) {
      expect("(");
      const int d = integer();
      expect(",");
      const int q = integer();
      expect(")");
      return projective_geometry(d, q);
    }
    if (consume("U")) {
      expect("(");
      const int r = integer();
      expect(",");
      const int n = integer();
      expect(")");
      return uniform(r, n);
    }
    fail("expected 'U(', 'PG(' or '('");
  }

  int integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 4) fail("expected integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  bool consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) fail("expected '" + std::string(token) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_, line_, message + " at column " + std::to_string(pos_ + 1) + " of \"" +
                                         std::string(text_) + "\"");
  }

  std::string_view text_;
  std::string source_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Matroid parse_name_expression(std::string_view text, const std::string& source = "<expr>", int line = 1) {
  return detail::ExprParser(text, source, line).parse();
}

// ---------------------------------------------------------------------------
// Record -> Matroid

/// Rank table induced by a basis list; throws when the list is not the basis
/// family of a matroid.
inline Matroid matroid_from_bases(int n, int rank, const std::vector<SubsetMask>& bases) {
  if (n < 0 || n > kGroundSetCap) throw Error(ErrorKind::TooLarge, "ground set size out of range");
  if (bases.empty()) throw Error(ErrorKind::InvalidArgument, "a matroid has at least one basis");
  RankTable t = RankTable::zeros(n);
  std::vector<char> independent(t.ranks.size(), 0);
  for (SubsetMask b : bases) {
    if ((b & ~full_mask(n)) != 0) throw Error(ErrorKind::InvalidArgument, "basis element outside the ground set");
    if (popcount(b) != rank) throw Error(ErrorKind::InvalidArgument, "basis " + tuple_string(b) + " has wrong size");
    independent[b] = 1;
  }
  for (std::size_t s = t.ranks.size(); s-- > 0;) {
    if (!independent[s]) continue;
    for (ElementId e : elements_of(static_cast<SubsetMask>(s))) independent[s & ~bit(e)] = 1;
  }
  for (std::size_t s = 1; s < t.ranks.size(); ++s) {
    const auto x = static_cast<SubsetMask>(s);
    if (independent[s]) {
      t.ranks[s] = static_cast<std::uint8_t>(popcount(x));
      continue;
    }
    int best = 0;
    for (ElementId e : elements_of(x)) best = std::max<int>(best, t.ranks[x & ~bit(e)]);
    t.ranks[s] = static_cast<std::uint8_t>(best);
  }
  Matroid m = Matroid::from_table(std::move(t));
  std::vector<SubsetMask> given = bases;
  std::sort(given.begin(), given.end());
  given.erase(std::unique(given.begin(), given.end()), given.end());
  if (m.bases() != given) throw Error(ErrorKind::InvalidRankTable, "basis list violates the exchange axiom");
  return m;
}

inline Matroid to_matroid(const MatroidRecord& record) {
  switch (record.format) {
    case MatroidRecord::Format::Bases: return matroid_from_bases(record.n, record.rank, record.bases);
    case MatroidRecord::Format::Matrix: return from_matrix(record.matrix);
    case MatroidRecord::Format::Name: return parse_name_expression(record.expr);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown record format");
}

inline MatroidRecord bases_record(const Matroid& m) {
  MatroidRecord r;
  r.format = MatroidRecord::Format::Bases;
  r.n = m.size();
  r.rank = m.rank();
  r.bases = m.bases();
  std::sort(r.bases.begin(), r.bases.end(),
            [](SubsetMask a, SubsetMask b) { return tuple_string(a) < tuple_string(b); });
  return r;
}

inline MatroidRecord matrix_record(const GFMatrix& m) {
  MatroidRecord r;
  r.format = MatroidRecord::Format::Matrix;
  r.matrix = m;
  return r;
}

inline MatroidRecord name_record(std::string expr) {
  MatroidRecord r;
  r.format = MatroidRecord::Format::Name;
  r.expr = std::move(expr);
  return r;
}

// ---------------------------------------------------------------------------
// Line-oriented text format

inline std::string write_text(const MatroidRecord& r) {
  std::ostringstream out;
  switch (r.format) {
    case MatroidRecord::Format::Bases: {
      out << "format: bases\n" << "n: " << r.n << "\n" << "rank: " << r.rank << "\n" << "bases:";
      for (SubsetMask b : r.bases) out << ' ' << (b == 0 ? std::string("-") : tuple_string(b));
      out << "\n";
      break;
    }
    case MatroidRecord::Format::Matrix: {
      const GFMatrix& m = r.matrix;
      out << "format: matrix\n" << "field: " << m.q << "\n" << "rows: " << m.rows << "\n" << "cols: " << m.cols << "\n";
      for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) out << (j ? " " : "") << static_cast<int>(m.at(i, j));
        out << "\n";
      }
      break;
    }
    case MatroidRecord::Format::Name: out << "format: name\n" << "expr: " << r.expr << "\n"; break;
  }
  return out.str();
}

namespace detail {

struct TextLine {
  int number;
  std::string text;
};

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline int parse_int(const std::string& value, const std::string& source, int line, const std::string& what) {
  if (value.empty() || value.size() > 6 ||
      !std::all_of(value.begin(), value.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError(source, line, "expected integer for '" + what + "', got \"" + value + "\"");
  }
  return std::stoi(value);
}

inline SubsetMask parse_tuple(const std::string& token, int n, const std::string& source, int line) {
  if (token == "-") return 0;
  SubsetMask s = 0;
  for (char c : token) {
    const int e = element_from_char(c);
    if (e < 0 || e >= n) throw ParseError(source, line, "expected element in [0," + std::to_string(n) + "), got '" + c + "'");
    if (s & bit(e)) throw ParseError(source, line, "repeated element in basis \"" + token + "\"");
    s |= bit(e);
  }
  return s;
}

}  // namespace detail

inline MatroidRecord parse_text(std::string_view text, const std::string& source = "<text>") {
  std::vector<detail::TextLine> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::string t = detail::trim(raw);
      if (!t.empty()) lines.push_back({number, std::move(t)});
    }
  }
  std::size_t pos = 0;
  auto last_line = [&] { return lines.empty() ? 1 : lines.back().number; };
  auto key_value = [&](const std::string& key) -> std::pair<std::string, int> {
    if (pos >= lines.size()) throw ParseError(source, last_line(), "expected '" + key + ":' but reached end of input");
    const auto& l = lines[pos];
    const std::string prefix = key + ":";
    if (l.text.compare(0, prefix.size(), prefix) != 0) {
      throw ParseError(source, l.number, "expected '" + prefix + "', got \"" + l.text + "\"");
    }
    ++pos;
    return {detail::trim(std::string_view(l.text).substr(prefix.size())), l.number};
  };

  MatroidRecord r;
  const auto [format, format_line] = key_value("format");
  if (format == "bases") {
    r.format = MatroidRecord::Format::Bases;
    auto [nv, nl] = key_value("n");
    r.n = detail::parse_int(nv, source, nl, "n");
    if (r.n > kGroundSetCap) throw ParseError(source, nl, "n exceeds the ground-set cap");
    auto [rv, rl] = key_value("rank");
    r.rank = detail::parse_int(rv, source, rl, "rank");
    auto [bv, bl] = key_value("bases");
    std::string all = bv;
    std::vector<std::pair<std::string, int>> tokens;
    auto split = [&](const std::string& s, int line) {
      std::istringstream ts(s);
      std::string tok;
      while (ts >> tok) tokens.emplace_back(tok, line);
    };
    split(bv, bl);
    for (; pos < lines.size(); ++pos) split(lines[pos].text, lines[pos].number);
    for (const auto& [tok, line] : tokens) r.bases.push_back(detail::parse_tuple(tok, r.n, source, line));
    if (r.bases.empty() && r.rank == 0) r.bases.push_back(0);
    if (r.bases.empty()) throw ParseError(source, bl, "expected at least one basis tuple");
    try {
      (void)matroid_from_bases(r.n, r.rank, r.bases);
    } catch (const Error& e) {
      throw ParseError(source, bl, e.what());
    }
  } else if (format == "matrix") {
    r.format = MatroidRecord::Format::Matrix;
    auto [qv, ql] = key_value("field");
    r.matrix.q = detail::parse_int(qv, source, ql, "field");
    if (!is_supported_field(r.matrix.q)) throw ParseError(source, ql, "expected field order in {2,3,4,5,7,8,9}");
    auto [rv, rl] = key_value("rows");
    r.matrix.rows = detail::parse_int(rv, source, rl, "rows");
    auto [cv, cl] = key_value("cols");
    r.matrix.cols = detail::parse_int(cv, source, cl, "cols");
    if (r.matrix.cols > kGroundSetCap) throw ParseError(source, cl, "cols exceeds the ground-set cap");
    if (r.matrix.rows > kGroundSetCap) throw ParseError(source, rl, "rows exceeds the ground-set cap");
    for (int i = 0; i < r.matrix.rows; ++i) {
      if (pos >= lines.size()) throw ParseError(source, last_line(), "expected matrix row " + std::to_string(i + 1));
      const auto& l = lines[pos++];
      std::istringstream ts(l.text);
      std::vector<std::string> toks;
      std::string tok;
      while (ts >> tok) toks.push_back(tok);
      // A single token of length cols is read digit by digit: "1011".
      if (toks.size() == 1 && static_cast<int>(toks[0].size()) == r.matrix.cols && r.matrix.cols > 1) {
        std::vector<std::string> chars;
        for (char c : toks[0]) chars.emplace_back(1, c);
        toks = chars;
      }
      if (static_cast<int>(toks.size()) != r.matrix.cols) {
        throw ParseError(source, l.number, "expected " + std::to_string(r.matrix.cols) + " entries, got " +
                                               std::to_string(toks.size()));
      }
      for (const auto& t : toks) {
        const int v = detail::parse_int(t, source, l.number, "entry");
        if (v >= r.matrix.q) throw ParseError(source, l.number, "entry " + t + " is not in GF(" + std::to_string(r.matrix.q) + ")");
        r.matrix.entries.push_back(static_cast<FieldElement>(v));
      }
    }
    if (pos < lines.size()) throw ParseError(source, lines[pos].number, "expected end of input after matrix rows");
  } else if (format == "name") {
    r.format = MatroidRecord::Format::Name;
    auto [ev, el] = key_value("expr");
    r.expr = ev;
    (void)parse_name_expression(r.expr, source, el);
  } else {
    throw ParseError(source, format_line, "expected format 'bases', 'matrix' or 'name', got \"" + format + "\"");
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON mirror

inline Json to_json(const MatroidRecord& r) {
  Json j;
  switch (r.format) {
    case MatroidRecord::Format::Bases: {
      j["format"] = "bases";
      j["n"] = r.n;
      j["rank"] = r.rank;
      Json list = Json::array();
      for (SubsetMask b : r.bases) list.push_back(tuple_string(b));
      j["bases"] = list;
      break;
    }
    case MatroidRecord::Format::Matrix: {
      j["format"] = "matrix";
      j["field"] = r.matrix.q;
      j["rows"] = r.matrix.rows;
      j["cols"] = r.matrix.cols;
      Json rows = Json::array();
      for (int i = 0; i < r.matrix.rows; ++i) {
        Json row = Json::array();
        for (int c = 0; c < r.matrix.cols; ++c) row.push_back(static_cast<int>(r.matrix.at(i, c)));
        rows.push_back(row);
      }
      j["entries"] = rows;
      break;
    }
    case MatroidRecord::Format::Name:
      j["format"] = "name";
      j["expr"] = r.expr;
      break;
  }
  return j;
}

inline MatroidRecord record_from_json(const Json& j, const std::string& source = "<json>") {
  auto fail = [&](const std::string& msg) -> MatroidRecord { throw ParseError(source, 0, msg); };
  if (j.is_string()) return name_record(j.get<std::string>());
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string()) {
    return fail("expected object with string field \"format\"");
  }
  auto get_int = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw ParseError(source, 0, std::string("expected integer field \"") + key + "\"");
    return j[key].get<int>();
  };
  const std::string format = j["format"].get<std::string>();
  MatroidRecord r;
  if (format == "bases") {
    r.format = MatroidRecord::Format::Bases;
    r.n = get_int("n");
    if (r.n < 0 || r.n > kGroundSetCap) return fail("\"n\" out of range");
    r.rank = get_int("rank");
    if (!j.contains("bases") || !j["bases"].is_array()) return fail("expected array field \"bases\"");
    for (const auto& b : j["bases"]) {
      if (!b.is_string()) return fail("expected basis tuple string");
      r.bases.push_back(detail::parse_tuple(b.get<std::string>().empty() ? "-" : b.get<std::string>(), r.n, source, 0));
    }
    if (r.bases.empty() && r.rank == 0) r.bases.push_back(0);
  } else if (format == "matrix") {
    r.format = MatroidRecord::Format::Matrix;
    r.matrix.q = get_int("field");
    r.matrix.rows = get_int("rows");
    r.matrix.cols = get_int("cols");
    if (r.matrix.rows < 0 || r.matrix.cols < 0 || r.matrix.rows > kGroundSetCap || r.matrix.cols > kGroundSetCap) {
      return fail("matrix dimensions out of range");
    }
    if (!j.contains("entries") || !j["entries"].is_array() || static_cast<int>(j["entries"].size()) != r.matrix.rows) {
      return fail("expected \"entries\" with one array per row");
    }
    for (const auto& row : j["entries"]) {
      if (!row.is_array() || static_cast<int>(row.size()) != r.matrix.cols) return fail("matrix row has wrong length");
      for (const auto& x : row) {
        if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() >= r.matrix.q) return fail("matrix entry outside the field");
        r.matrix.entries.push_back(static_cast<FieldElement>(x.get<int>()));
      }
    }
  } else if (format == "name") {
    r.format = MatroidRecord::Format::Name;
    if (!j.contains("expr") || !j["expr"].is_string()) return fail("expected string field \"expr\"");
    r.expr = j["expr"].get<std::string>();
  } else {
    return fail("expected format \"bases\", \"matrix\" or \"name\", got \"" + format + "\"");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Loading from the command line: a file path (text or JSON) or a name expression.

struct LoadedMatroid {
  Matroid matroid;
  std::string label;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LoadedMatroid load_matroid(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    const std::string content = read_file(arg);
    const auto first = content.find_first_not_of(" \t\r\n");
    MatroidRecord r;
    if (first != std::string::npos && content[first] == '{') {
      Json j;
      try {
        j = Json::parse(content);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(arg, 0, std::string("invalid JSON: ") + e.what());
      }
      r = record_from_json(j, arg);
    } else {
      r = parse_text(content, arg);
    }
    return {to_matroid(r), r.format == MatroidRecord::Format::Name ? r.expr : arg};
  }
  return {parse_name_expression(arg), arg};
}

}  // namespace flatclass
