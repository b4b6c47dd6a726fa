#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flatclass/flatclass.hpp"

namespace flatclass::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCap = 3;

struct Options {
  std::string class_arg = "binary-targets";
  std::vector<std::string> matroids;
  std::string universe = "all";
  int max_elements = 0;
  int max_rank = -1;
  int rank_filter = -1;
  int jobs = 1;
  std::string output;
  std::string out_dir;
  std::string cache;
  std::string suite;
  std::string format = "text";
};

inline Universe parse_universe(const std::string& s) {
  if (s == "all") return Universe::all();
  std::string digits;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
  }
  const bool gf_prefix = s.rfind("gf", 0) == 0 || s.rfind("GF", 0) == 0;
  if ((!gf_prefix && digits != s) || digits.empty() || digits.size() > 2) {
    throw ParseError("--universe", 0, "expected 'all' or 'gf<q>', got \"" + s + "\"");
  }
  const int q = std::stoi(digits);
  if (!is_supported_field(q)) throw Error(ErrorKind::UnsupportedField, "GF(" + digits + ") is not supported");
  return Universe::representable(q);
}

inline Json set_json(SubsetMask s) {
  Json a = Json::array();
  for (ElementId e : elements_of(s)) a.push_back(e);
  return a;
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void check() {
    const HereditaryClass c = load_class(o_.class_arg);
    const LoadedMatroid m = single_matroid();
    const MembershipVerdict v = in_class(m.matroid, c);
    if (json()) {
      Json j;
      j["matroid"] = m.label;
      j["class"] = c.name();
      j["in_class"] = v.in_class;
      j["universe_violation"] = v.universe_violation;
      j["witness_flat"] = v.witness_flat ? set_json(*v.witness_flat) : Json(nullptr);
      j["forbidden"] = v.witness_forbidden_index ? Json(c.forbidden()[*v.witness_forbidden_index].label) : Json(nullptr);
      j["forbidden_index"] = v.witness_forbidden_index ? Json(*v.witness_forbidden_index) : Json(nullptr);
      emit(j);
      return;
    }
    if (v.in_class) {
      out_ << "IN_CLASS\n";
    } else if (v.universe_violation) {
      out_ << "NOT_IN_CLASS, outside universe " << c.universe().describe() << "\n";
    } else {
      out_ << "NOT_IN_CLASS, witness flat = " << format_set(*v.witness_flat)
           << ", forbidden = " << c.forbidden()[*v.witness_forbidden_index].label << "\n";
    }
  }

  void check_ext() {
    const HereditaryClass c = load_class(o_.class_arg);
    const LoadedMatroid m = single_matroid();
    const ExtensionVerdict v = in_extension_class(m.matroid, c);
    if (json()) {
      Json j;
      j["matroid"] = m.label;
      j["class"] = c.name();
      j["in_extension"] = v.in_extension;
      j["already_in_class"] = v.already_in_class;
      j["witness_element"] = v.witness_element ? Json(*v.witness_element) : Json(nullptr);
      emit(j);
      return;
    }
    if (!v.in_extension) {
      out_ << "NOT_IN_EXTENSION\n";
    } else if (v.already_in_class) {
      out_ << "IN_EXTENSION, already in class\n";
    } else {
      out_ << "IN_EXTENSION, witness element = " << *v.witness_element << "\n";
    }
  }

  void flats() {
    const LoadedMatroid m = single_matroid();
    const int lo = o_.rank_filter >= 0 ? o_.rank_filter : 0;
    const int hi = o_.rank_filter >= 0 ? o_.rank_filter : m.matroid.rank();
    if (json()) {
      Json j;
      j["matroid"] = m.label;
      Json by_rank = Json::object();
      for (int r = lo; r <= hi; ++r) {
        Json list = Json::array();
        for (SubsetMask f : m.matroid.flats(r)) list.push_back(set_json(f));
        by_rank[std::to_string(r)] = list;
      }
      j["flats"] = by_rank;
      emit(j);
      return;
    }
    for (int r = lo; r <= hi; ++r) {
      out_ << "rank " << r << ":";
      for (SubsetMask f : m.matroid.flats(r)) out_ << ' ' << format_set(f);
      out_ << "\n";
    }
  }

  void iso() {
    if (o_.matroids.size() != 2) throw ParseError("--matroid", 0, "expected exactly two matroids");
    const LoadedMatroid a = load_matroid(o_.matroids[0]);
    const LoadedMatroid b = load_matroid(o_.matroids[1]);
    const bool same = isomorphic(a.matroid, b.matroid);
    if (json()) {
      Json j;
      j["a"] = a.label;
      j["b"] = b.label;
      j["isomorphic"] = same;
      j["canonical_a"] = canonical_form(a.matroid).hex();
      j["canonical_b"] = canonical_form(b.matroid).hex();
      emit(j);
      return;
    }
    out_ << (same ? "ISOMORPHIC" : "NOT_ISOMORPHIC") << "\n";
  }

  void enumerate() {
    const Universe u = parse_universe(o_.universe);
    const EnumLimits lim = limits();
    std::optional<std::vector<Matroid>> ms;
    if (!o_.cache.empty() && std::filesystem::exists(o_.cache)) ms = read_cache(read_file(o_.cache), u, lim, o_.cache);
    if (!ms) {
      ms = enumerate_universe(u, lim, o_.jobs);
      if (!o_.cache.empty()) write_file(o_.cache, write_cache(u, lim, *ms));
    }
    if (json()) {
      Json j;
      j["universe"] = u.describe();
      j["limits"] = Json{{"max_elements", lim.max_elements}, {"max_rank", lim.max_rank}};
      j["count"] = ms->size();
      Json list = Json::array();
      for (const Matroid& m : *ms) list.push_back(found_json(m));
      j["matroids"] = list;
      emit(j);
      return;
    }
    out_ << write_cache(u, lim, *ms);
  }

  void forbidden_ext() {
    const HereditaryClass c = load_class(o_.class_arg);
    const SearchReport report = forbidden_flats_ext(c, limits(), o_.jobs);
    if (!o_.out_dir.empty()) {
      std::filesystem::create_directories(o_.out_dir);
      for (std::size_t i = 0; i < report.found.size(); ++i) {
        std::ostringstream name;
        name << "flat_" << std::string(3 - std::min<std::size_t>(3, std::to_string(i).size()), '0') << i << ".json";
        write_file((std::filesystem::path(o_.out_dir) / name.str()).string(),
                   found_json(report.found[i].matroid).dump(2) + "\n");
      }
      write_file((std::filesystem::path(o_.out_dir) / "summary.json").string(), to_json(report).dump(2) + "\n");
    }
    if (json()) {
      emit(to_json(report));
      return;
    }
    out_ << "class " << report.class_name << ": r = " << report.params.r << ", k = " << report.params.k
         << ", bound = " << report.params.bound << "\n";
    out_ << report.universe_note << "\n";
    out_ << "found " << report.found.size() << (report.complete ? " (complete)" : " (partial)") << "\n";
    for (const auto& f : report.found) {
      out_ << "  n=" << f.matroid.size() << " rank=" << f.matroid.rank() << " " << f.key.hex() << "\n";
    }
  }

  void verify() {
    Json j;
    if (o_.suite == "axioms") {
      j = to_json(verify_axioms());
    } else {
      const HereditaryClass c = load_class(o_.class_arg);
      if (o_.suite == "lemma") {
        j = to_json(verify_lemma(c, limits(), o_.jobs));
      } else if (o_.suite == "theorem") {
        j = to_json(verify_theorem_bound(c, limits(), o_.jobs));
      } else if (o_.suite == "oracle") {
        j = to_json(verify_oracle(c, limits(), o_.jobs));
      } else {
        throw ParseError("--suite", 0, "expected one of axioms, lemma, theorem, oracle");
      }
    }
    if (json()) {
      emit(j);
      return;
    }
    out_ << "suite " << o_.suite << ": violations = " << j["violations"].get<std::size_t>() << "\n";
  }

 private:
  bool json() const { return o_.format == "json"; }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  LoadedMatroid single_matroid() const {
    if (o_.matroids.size() != 1) throw ParseError("--matroid", 0, "expected exactly one matroid");
    return load_matroid(o_.matroids.front());
  }

  EnumLimits limits() const {
    return {o_.max_elements, o_.max_rank >= 0 ? o_.max_rank : o_.max_elements};
  }

  static void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError(path, 0, "cannot open for writing");
    f << content;
  }

  const Options& o_;
  std::ostream& out_;
};

/// Exit status: 0 on any completed run (the mathematical answer is in the
/// output), 2 on input or parse errors, 3 on cap violations.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hereditary matroid classes, their extension classes and forbidden flats", "flatclass"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("-o,--output", o.output, "Write the report to this file instead of stdout");
  };
  auto add_limits = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--max-elements", o.max_elements, "Largest ground set searched")->check(CLI::NonNegativeNumber);
    if (required) opt->required();
    sub->add_option("--max-rank", o.max_rank, "Largest rank searched (default: max-elements)")->check(CLI::NonNegativeNumber);
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "Class membership with witness flat");
  check->add_option("--class", o.class_arg, "Built-in class name or JSON config path")->required();
  check->add_option("--matroid", o.matroids, "Matroid file or name expression")->required();
  add_common(check);

  auto* check_ext = app.add_subcommand("check-ext", "Extension-class membership with witness element");
  check_ext->add_option("--class", o.class_arg, "Built-in class name or JSON config path")->required();
  check_ext->add_option("--matroid", o.matroids, "Matroid file or name expression")->required();
  add_common(check_ext);

  auto* flats = app.add_subcommand("flats", "List flats by rank");
  flats->add_option("--matroid", o.matroids, "Matroid file or name expression")->required();
  flats->add_option("--rank", o.rank_filter, "Only flats of this rank")->check(CLI::NonNegativeNumber);
  add_common(flats);

  auto* iso = app.add_subcommand("iso", "Test two matroids for isomorphism");
  iso->add_option("--matroid", o.matroids, "Two matroid files or name expressions");
  iso->add_option("matroids", o.matroids, "Matroids as positional arguments");
  add_common(iso);

  auto* enumerate = app.add_subcommand("enumerate", "Canonical representatives of a universe");
  enumerate->add_option("--universe", o.universe, "'all' or 'gf<q>'");
  enumerate->add_option("--cache", o.cache, "Cache file read if valid, written otherwise");
  add_limits(enumerate, true);
  add_common(enumerate);

  auto* forbidden = app.add_subcommand("forbidden-ext", "Search minimal forbidden flats of the extension class");
  forbidden->add_option("--class", o.class_arg, "Built-in class name or JSON config path")->required();
  forbidden->add_option("--out", o.out_dir, "Directory for one JSON per found flat plus summary.json");
  add_limits(forbidden, true);
  add_common(forbidden);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", o.suite, "Suite to run")->required()->check(CLI::IsMember({"axioms", "lemma", "theorem", "oracle"}));
  verify->add_option("--class", o.class_arg, "Built-in class name or JSON config path");
  add_limits(verify, false);
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::ostringstream buffer;
  std::ostream& sink = o.output.empty() ? out : static_cast<std::ostream&>(buffer);
  try {
    Runner runner(o, sink);
    if (check->parsed()) runner.check();
    if (check_ext->parsed()) runner.check_ext();
    if (flats->parsed()) runner.flats();
    if (iso->parsed()) runner.iso();
    if (enumerate->parsed()) runner.enumerate();
    if (forbidden->parsed()) runner.forbidden_ext();
    if (verify->parsed()) runner.verify();
    if (!o.output.empty()) {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw ParseError(o.output, 0, "cannot open for writing");
      f << buffer.str();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::TooLarge ? kExitCap : kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace flatclass::cli
