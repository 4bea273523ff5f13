#include "fockbench/dsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <regex>
#include <set>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fockbench {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      tokens.push_back({line.substr(start, i - start), start + 1});
    }
  }
  return tokens;
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long long> parse_int(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> try_parse_angle(std::string_view text) {
  if (auto v = parse_double(text)) {
    return v;
  }
  static const std::regex pi_form(R"(^([+-]?)(?:(\d+(?:\.\d*)?)\*)?pi(?:/(\d+(?:\.\d*)?))?$)");
  std::cmatch m;
  if (!std::regex_match(text.data(), text.data() + text.size(), m, pi_form)) {
    return std::nullopt;
  }
  double value = std::numbers::pi;
  if (m[2].matched) {
    value *= *parse_double(std::string_view(m[2].first, static_cast<std::size_t>(m[2].length())));
  }
  if (m[3].matched) {
    const double den = *parse_double(std::string_view(m[3].first, static_cast<std::size_t>(m[3].length())));
    if (den == 0.0) {
      return std::nullopt;
    }
    value /= den;
  }
  return m[1].str() == "-" ? -value : value;
}

std::optional<cplx> parse_complex(std::string_view s) {
  if (s.empty()) {
    return std::nullopt;
  }
  if (s.back() != 'i') {
    if (auto re = parse_double(s)) {
      return cplx{*re, 0.0};
    }
    return std::nullopt;
  }
  s.remove_suffix(1);
  if (s.empty() || s == "+") {
    return cplx{0.0, 1.0};
  }
  if (s == "-") {
    return cplx{0.0, -1.0};
  }
  if (auto im = parse_double(s)) {
    return cplx{0.0, *im};
  }
  // re followed by a signed imaginary part; skip exponent signs.
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      auto re = parse_double(s.substr(0, k));
      std::string_view ims = s.substr(k);
      std::optional<double> im;
      if (ims == "+" || ims == "-") {
        im = ims == "+" ? 1.0 : -1.0;
      } else {
        im = parse_double(ims);
      }
      if (re && im) {
        return cplx{*re, *im};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

class Parser {
 public:
  Circuit run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      std::string_view line = text.substr(pos, end - pos);
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line_ = line_no;
      handle_line(line);
      pos = end + 1;
    }
    last_line_ = line_no;
    return finish();
  }

 private:
  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(line_, column, message);
  }

  void handle_line(std::string_view line) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) {
      return;
    }
    const Token& kw = tokens.front();
    if (kw.text == "system") {
      if (system_) {
        fail(kw.column, fmt::format("duplicate system declaration (first on line {})", system_line_));
      }
      parse_system(tokens);
      return;
    }
    static const std::set<std::string_view> known = {"input", "bs", "phase", "kerr", "vertex", "measure"};
    if (!known.contains(kw.text)) {
      fail(kw.column, fmt::format("unknown keyword '{}'", kw.text));
    }
    if (!system_) {
      fail(kw.column, fmt::format("'{}' before the system declaration", kw.text));
    }
    if (kw.text == "input") {
      parse_input(line, tokens);
    } else if (kw.text == "measure") {
      parse_measure(tokens);
    } else {
      parse_element(tokens);
    }
  }

  // key=value with an integer value
  long long int_option(const Token& t, std::string_view key) {
    auto v = parse_int(t.text.substr(key.size() + 1));
    if (!v) {
      fail(t.column + key.size() + 1, fmt::format("expected an integer after '{}='", key));
    }
    return *v;
  }

  void parse_system(const std::vector<Token>& tokens) {
    std::optional<long long> bosons;
    std::optional<long long> fermions;
    std::optional<long long> cutoff;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      auto take = [&](std::string_view key, std::optional<long long>& slot) {
        if (!t.text.starts_with(key) || t.text.size() <= key.size() || t.text[key.size()] != '=') {
          return false;
        }
        if (slot) {
          fail(t.column, fmt::format("'{}' given twice", key));
        }
        slot = int_option(t, key);
        if (*slot < 0 || *slot > 64) {
          fail(t.column, fmt::format("'{}' must be between 0 and 64", key));
        }
        return true;
      };
      if (!take("bosons", bosons) && !take("fermions", fermions) && !take("cutoff", cutoff)) {
        fail(t.column, fmt::format("unexpected system option '{}'", t.text));
      }
    }
    if (!bosons) {
      fail(tokens.front().column, "system declaration needs bosons=<int>");
    }
    if (!cutoff) {
      fail(tokens.front().column, "system declaration needs cutoff=<int>");
    }
    if (*bosons + fermions.value_or(0) == 0) {
      fail(tokens.front().column, "system needs at least one mode");
    }
    if (*cutoff < 1) {
      fail(tokens.front().column, "cutoff must be at least 1");
    }
    system_.emplace(static_cast<std::size_t>(*bosons), static_cast<std::size_t>(fermions.value_or(0)),
                    static_cast<int>(*cutoff));
    system_line_ = line_;
  }

  // `<k>` is a global mode number; `b<k>` and `f<k>` count within one species.
  std::size_t mode_at(std::string_view text, std::size_t column) {
    const char prefix = text.empty() ? '\0' : text.front();
    const bool boson = prefix == 'b';
    const bool fermion = prefix == 'f';
    auto v = parse_int(boson || fermion ? text.substr(1) : text);
    if (!v) {
      fail(column, fmt::format("expected a mode number, got '{}'", text));
    }
    if (boson || fermion) {
      const std::size_t count = boson ? system_->boson_modes() : system_->fermion_modes();
      if (*v < 1 || static_cast<std::size_t>(*v) > count) {
        fail(column, fmt::format("mode {} out of range ({}1..{}{})", text, prefix, prefix, count));
      }
      return static_cast<std::size_t>(*v - 1) + (fermion ? system_->boson_modes() : 0);
    }
    if (*v < 1 || static_cast<std::size_t>(*v) > system_->mode_count()) {
      fail(column, fmt::format("mode {} out of range (1..{})", *v, system_->mode_count()));
    }
    return static_cast<std::size_t>(*v - 1);
  }

  std::vector<std::size_t> distinct_modes(const std::vector<Token>& tokens, std::size_t first, std::size_t count) {
    std::vector<std::size_t> modes;
    for (std::size_t i = first; i < first + count; ++i) {
      const std::size_t m = mode_at(tokens[i].text, tokens[i].column);
      if (std::find(modes.begin(), modes.end(), m) != modes.end()) {
        fail(tokens[i].column, fmt::format("duplicate mode {}", m + 1));
      }
      modes.push_back(m);
    }
    return modes;
  }

  void require_species(std::size_t mode, Species s, std::size_t column, std::string_view what) {
    if (system_->species(mode) != s) {
      fail(column, fmt::format("species mismatch: {} mode {} must be {}", what, mode + 1,
                               s == Species::boson ? "bosonic" : "fermionic"));
    }
  }

  void require_count(const std::vector<Token>& tokens, std::size_t min, std::size_t max, std::string_view usage) {
    if (tokens.size() < min + 1) {
      const Token& last = tokens.back();
      fail(last.column + last.text.size(), fmt::format("too few arguments; usage: {}", usage));
    }
    if (tokens.size() > max + 1) {
      fail(tokens[max + 1].column, fmt::format("unexpected argument '{}'; usage: {}", tokens[max + 1].text, usage));
    }
  }

  double angle_at(const Token& t, std::size_t offset = 0) {
    auto v = try_parse_angle(t.text.substr(offset));
    if (!v) {
      fail(t.column + offset, fmt::format("malformed angle '{}'", t.text.substr(offset)));
    }
    return *v;
  }

  double keyed_angle(const Token& t, std::string_view key) {
    if (!t.text.starts_with(key) || t.text.size() <= key.size() || t.text[key.size()] != '=') {
      fail(t.column, fmt::format("expected {}=<radians>, got '{}'", key, t.text));
    }
    return angle_at(t, key.size() + 1);
  }

  LadderPolynomial creation_product(const std::vector<std::pair<std::size_t, std::size_t>>& modes) {
    FactorSequence f;
    std::set<std::size_t> fermions;
    for (const auto& [m, column] : modes) {
      const Species s = system_->species(m);
      if (s == Species::fermion && !fermions.insert(m).second) {
        fail(column, fmt::format("fermionic mode {} created twice", m + 1));
      }
      f.push_back(create(m, s));
    }
    return LadderPolynomial::product(1.0, std::move(f));
  }

  void parse_input(std::string_view line, const std::vector<Token>& tokens) {
    if (input_) {
      fail(tokens.front().column, fmt::format("duplicate input declaration (first on line {})", input_line_));
    }
    if (tokens.size() < 2) {
      fail(tokens.front().column + 5, "expected 'create' or 'superpose'");
    }
    LadderPolynomial poly;
    if (tokens[1].text == "create") {
      if (tokens.size() < 3) {
        fail(tokens[1].column + 6, "input create needs at least one mode");
      }
      std::vector<std::pair<std::size_t, std::size_t>> modes;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        modes.emplace_back(mode_at(tokens[i].text, tokens[i].column), tokens[i].column);
      }
      poly = creation_product(modes);
    } else if (tokens[1].text == "superpose") {
      std::size_t offset = tokens[1].column - 1 + tokens[1].text.size();
      std::string_view rest = line.substr(offset);
      std::size_t start = 0;
      while (start <= rest.size()) {
        std::size_t end = rest.find(';', start);
        if (end == std::string_view::npos) {
          end = rest.size();
        }
        poly += parse_superpose_term(rest.substr(start, end - start), offset + start + 1);
        start = end + 1;
      }
    } else {
      fail(tokens[1].column, fmt::format("expected 'create' or 'superpose', got '{}'", tokens[1].text));
    }
    KetExpression ket = KetExpression::from_polynomial(poly);
    const double n2 = ket.norm_squared();
    if (!(n2 > 1e-24)) {
      fail(tokens.front().column, "input state has zero norm");
    }
    input_ = ket.normalized();
    input_line_ = line_;
  }

  LadderPolynomial parse_superpose_term(std::string_view piece, std::size_t column) {
    const auto tokens = tokenize(piece);
    if (tokens.size() != 1) {
      fail(tokens.empty() ? column : column + tokens[1].column - 1, "expected <complex>:<mode-list>");
    }
    const Token& t = tokens.front();
    const std::size_t col = column + t.column - 1;
    const auto colon = t.text.find(':');
    if (colon == std::string_view::npos) {
      fail(col, fmt::format("expected <complex>:<mode-list>, got '{}'", t.text));
    }
    auto coeff = parse_complex(t.text.substr(0, colon));
    if (!coeff) {
      fail(col, fmt::format("malformed complex coefficient '{}'", t.text.substr(0, colon)));
    }
    std::vector<std::pair<std::size_t, std::size_t>> modes;
    std::string_view list = t.text.substr(colon + 1);
    std::size_t start = 0;
    while (!list.empty() && start <= list.size()) {
      std::size_t end = list.find(',', start);
      if (end == std::string_view::npos) {
        end = list.size();
      }
      const std::size_t mcol = col + colon + 1 + start;
      modes.emplace_back(mode_at(list.substr(start, end - start), mcol), mcol);
      start = end + 1;
    }
    return *coeff * creation_product(modes);
  }

  void parse_measure(const std::vector<Token>& tokens) {
    if (measured_) {
      fail(tokens.front().column, fmt::format("duplicate measure declaration (first on line {})", measure_line_));
    }
    if (tokens.size() < 2) {
      fail(tokens.front().column + 7, "expected 'all' or a list of modes");
    }
    if (tokens[1].text == "all") {
      require_count(tokens, 1, 1, "measure all | measure <mode>+");
      std::vector<std::size_t> all(system_->mode_count());
      for (std::size_t m = 0; m < all.size(); ++m) {
        all[m] = m;
      }
      measured_ = std::move(all);
    } else {
      measured_ = distinct_modes(tokens, 1, tokens.size() - 1);
    }
    measure_line_ = line_;
  }

  void parse_element(const std::vector<Token>& tokens) {
    const std::string_view kw = tokens.front().text;
    if (kw == "bs") {
      constexpr std::string_view usage = "bs <m1> <m2> (sym|asym|angle=<radians>)";
      require_count(tokens, 3, 3, usage);
      const auto modes = distinct_modes(tokens, 1, 2);
      for (std::size_t i = 0; i < 2; ++i) {
        require_species(modes[i], Species::boson, tokens[i + 1].column, "beam splitter");
      }
      BeamSplitter bs{{modes[0], modes[1]}};
      const Token& v = tokens[3];
      if (v.text == "sym") {
        bs.variant = BeamSplitter::Variant::symmetric;
      } else if (v.text == "asym") {
        bs.variant = BeamSplitter::Variant::antisymmetric;
      } else if (v.text.starts_with("angle=")) {
        bs.variant = BeamSplitter::Variant::angle;
        bs.angle = keyed_angle(v, "angle");
      } else {
        fail(v.column, fmt::format("unknown beam splitter variant '{}'", v.text));
      }
      elements_.emplace_back(bs);
    } else if (kw == "phase") {
      require_count(tokens, 2, 2, "phase <mode> <radians>");
      const std::size_t m = mode_at(tokens[1].text, tokens[1].column);
      require_species(m, Species::boson, tokens[1].column, "phase shifter");
      elements_.emplace_back(PhaseShifter{m, angle_at(tokens[2])});
    } else if (kw == "kerr") {
      require_count(tokens, 2, 3, "kerr <m1> <m2> [strength=<radians>]");
      const auto modes = distinct_modes(tokens, 1, 2);
      for (std::size_t i = 0; i < 2; ++i) {
        require_species(modes[i], Species::boson, tokens[i + 1].column, "Kerr medium");
      }
      KerrMedium k{{modes[0], modes[1]}};
      if (tokens.size() == 4) {
        k.strength = keyed_angle(tokens[3], "strength");
      }
      elements_.emplace_back(k);
    } else if (kw == "vertex") {
      require_count(tokens, 4, 4, "vertex <photon-mode> <e-mode> <p-mode> theta=<radians>");
      const auto modes = distinct_modes(tokens, 1, 3);
      require_species(modes[0], Species::boson, tokens[1].column, "vertex photon");
      require_species(modes[1], Species::fermion, tokens[2].column, "vertex electron");
      require_species(modes[2], Species::fermion, tokens[3].column, "vertex positron");
      elements_.emplace_back(AnnihilationVertex{modes[0], modes[1], modes[2], keyed_angle(tokens[4], "theta")});
    }
  }

  Circuit finish() {
    line_ = last_line_;
    if (!system_) {
      fail(1, "missing system declaration");
    }
    if (!input_) {
      fail(1, "missing input declaration");
    }
    if (!measured_) {
      std::vector<std::size_t> all(system_->mode_count());
      for (std::size_t m = 0; m < all.size(); ++m) {
        all[m] = m;
      }
      measured_ = std::move(all);
    }
    try {
      return Circuit(*system_, std::move(elements_), std::move(*input_), std::move(*measured_));
    } catch (const std::invalid_argument& e) {
      fail(1, e.what());
    }
  }

  std::size_t line_ = 0;
  std::size_t last_line_ = 0;
  std::optional<ModeSystem> system_;
  std::size_t system_line_ = 0;
  std::optional<KetExpression> input_;
  std::size_t input_line_ = 0;
  std::optional<std::vector<std::size_t>> measured_;
  std::size_t measure_line_ = 0;
  std::vector<CircuitElement> elements_;
};

std::string render_number(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

Circuit parse_circuit(std::string_view text) { return Parser{}.run(text); }

double parse_angle(std::string_view text) {
  auto v = try_parse_angle(text);
  if (!v) {
    throw std::invalid_argument(fmt::format("malformed angle '{}'", text));
  }
  return *v;
}

std::string render(const Circuit& circuit) {
  const ModeSystem& sys = circuit.system();
  std::string out = fmt::format("system bosons={}", sys.boson_modes());
  if (sys.fermion_modes() > 0) {
    out += fmt::format(" fermions={}", sys.fermion_modes());
  }
  out += fmt::format(" cutoff={}\n", sys.cutoff());

  const auto& terms = circuit.input().polynomial().terms();
  auto mode_list = [](const FactorSequence& f, const char* sep) {
    std::vector<std::size_t> modes;
    for (const auto& s : f) {
      modes.push_back(s.mode + 1);
    }
    return fmt::format("{}", fmt::join(modes, sep));
  };
  if (terms.size() == 1 && terms.begin()->second == cplx{1.0, 0.0} && !terms.begin()->first.empty()) {
    out += fmt::format("input create {}\n", mode_list(terms.begin()->first, " "));
  } else {
    std::vector<std::string> pieces;
    for (const auto& [factors, c] : terms) {
      pieces.push_back(fmt::format("{}{:+.17g}i:{}", render_number(c.real()), c.imag(), mode_list(factors, ",")));
    }
    out += fmt::format("input superpose {}\n", fmt::join(pieces, " ; "));
  }

  for (const auto& e : circuit.elements()) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      out += fmt::format("bs {} {} ", bs->modes[0] + 1, bs->modes[1] + 1);
      switch (bs->variant) {
        case BeamSplitter::Variant::symmetric:
          out += "sym\n";
          break;
        case BeamSplitter::Variant::antisymmetric:
          out += "asym\n";
          break;
        case BeamSplitter::Variant::angle:
          out += fmt::format("angle={}\n", render_number(bs->angle));
          break;
      }
    } else if (const auto* ps = std::get_if<PhaseShifter>(&e)) {
      out += fmt::format("phase {} {}\n", ps->mode + 1, render_number(ps->phase));
    } else if (const auto* k = std::get_if<KerrMedium>(&e)) {
      out += fmt::format("kerr {} {} strength={}\n", k->modes[0] + 1, k->modes[1] + 1, render_number(k->strength));
    } else if (const auto* v = std::get_if<AnnihilationVertex>(&e)) {
      out += fmt::format("vertex {} {} {} theta={}\n", v->photon_mode + 1, v->electron_mode + 1,
                         v->positron_mode + 1, render_number(v->theta));
    } else {
      throw std::invalid_argument("quadratic custom elements cannot be rendered as circuit text");
    }
  }

  const auto& measured = circuit.measured_modes();
  bool all = measured.size() == sys.mode_count();
  for (std::size_t i = 0; all && i < measured.size(); ++i) {
    all = measured[i] == i;
  }
  if (all) {
    out += "measure all\n";
  } else {
    std::vector<std::size_t> one_based;
    for (std::size_t m : measured) {
      one_based.push_back(m + 1);
    }
    out += fmt::format("measure {}\n", fmt::join(one_based, " "));
  }
  return out;
}

}  // namespace fockbench
