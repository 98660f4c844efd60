#include "anglelab/body_spec.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <string>

#include "anglelab/errors.hpp"

namespace anglelab {

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  BodySpec parse_all() {
    BodySpec spec = parse_spec();
    if (pos_ != text_.size()) fail("end of input");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(pos_, expected, std::string(text_));
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) fail("'" + std::string(token) + "'");
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || !std::isfinite(value)) fail("a number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return value;
  }

  std::vector<double> list() {
    std::vector<double> values{number()};
    while (consume(";")) values.push_back(number());
    return values;
  }

  BodySpec parse_spec() {
    if (consume("steiner(")) {
      expect("u=");
      std::vector<double> u = list();
      expect("|");
      BodySpec base = parse_spec();
      expect(")");
      if (u.size() != static_cast<std::size_t>(base.dim))
        throw ValidationError("steiner: u has " + std::to_string(u.size()) +
                              " components but the body has d=" + std::to_string(base.dim));
      return steiner_spec(std::move(u), std::move(base));
    }
    const std::size_t kind_pos = pos_;
    const std::string kind = identifier();
    if (kind.empty()) fail("a body kind (ball, box, simplex, ellipsoid, hpoly, polygon, steiner)");
    expect(":");
    if (kind == "hpoly" || kind == "polygon") {
      expect("@");
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ')' && text_[pos_] != '|') ++pos_;
      if (pos_ == start) fail("a file path");
      return load_file(kind, std::string(text_.substr(start, pos_ - start)));
    }
    if (kind != "ball" && kind != "box" && kind != "simplex" && kind != "ellipsoid") {
      pos_ = kind_pos;
      fail("a body kind (ball, box, simplex, ellipsoid, hpoly, polygon, steiner)");
    }

    std::optional<double> d, r;
    std::vector<double> lengths;
    do {
      const std::size_t key_pos = pos_;
      const std::string key = identifier();
      expect("=");
      if (key == "d") {
        const std::size_t value_pos = pos_;
        d = number();
        if (*d != std::floor(*d)) {
          pos_ = value_pos;
          fail("an integer dimension");
        }
      } else if (key == "r" && kind == "ball") {
        r = number();
      } else if ((key == "edges" && kind == "box") || (key == "axes" && kind == "ellipsoid")) {
        lengths = list();
      } else {
        pos_ = key_pos;
        fail(kind == "ball"        ? "key 'd' or 'r'"
             : kind == "box"       ? "key 'd' or 'edges'"
             : kind == "ellipsoid" ? "key 'd' or 'axes'"
                                   : "key 'd'");
      }
    } while (consume(","));

    if (!d && !lengths.empty()) d = static_cast<double>(lengths.size());
    if (!d) throw ValidationError(kind + ": missing d");
    if (*d < 1) throw ValidationError("d must be >= 1");
    const int dim = static_cast<int>(*d);
    if (kind == "ball") {
      const double radius = r.value_or(1.0);
      if (!(radius > 0.0)) throw ValidationError("ball radius must be positive");
      return ball_spec(dim, radius);
    }
    if (kind == "simplex") return simplex_spec(dim);
    if (lengths.empty()) lengths.assign(dim, 1.0);
    if (lengths.size() != static_cast<std::size_t>(dim))
      throw ValidationError(kind + ": expected " + std::to_string(dim) + " values, got " +
                            std::to_string(lengths.size()));
    return kind == "box" ? box_spec(std::move(lengths)) : ellipsoid_spec(std::move(lengths));
  }

  static BodySpec load_file(const std::string& kind, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(kind + ": cannot open '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(kind + ": invalid JSON in '" + path + "': " + e.what());
    }
    if (!j.is_array()) throw ValidationError(kind + ": '" + path + "' must hold a JSON array");
    BodySpec spec;
    try {
      if (kind == "hpoly") {
        std::vector<Halfspace> hs;
        for (const auto& item : j)
          hs.push_back({item.at("normal").get<std::vector<double>>(),
                        item.at("offset").get<double>()});
        spec = hpolytope_spec(std::move(hs));
      } else {
        std::vector<Point> verts;
        for (const auto& item : j) verts.push_back(item.get<std::vector<double>>());
        spec = polygon_spec(std::move(verts));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(kind + ": malformed entry in '" + path + "': " + e.what());
    }
    if (spec.kind == BodyKind::hpolytope && spec.dim < 1)
      throw ValidationError("hpoly: no halfspaces in '" + path + "'");
    spec.source = path;
    return spec;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BodySpec parse_body_spec(std::string_view text) {
  if (text.empty()) throw ParseError(0, "a body spec", "");
  return SpecParser(text).parse_all();
}

BodyPtr parse_body(std::string_view text) { return make_body(parse_body_spec(text)); }

}  // namespace anglelab
