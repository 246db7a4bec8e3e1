#ifndef COLLAPSELAB_IO_HPP_
#define COLLAPSELAB_IO_HPP_

// JSON file formats for groups, quotient oracles, metric spaces and
// actions, plus the report envelope shared by every CLI subcommand.
//
// Conventions: words are 1-based letter arrays (negative = inverse);
// points and permutation images are 0-based; big integers are decimal
// strings; exact rationals are ["numerator", "denominator"] string pairs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "action.hpp"
#include "bigint.hpp"
#include "error.hpp"
#include "group.hpp"
#include "metric.hpp"
#include "subgroups.hpp"
#include "words.hpp"

namespace collapselab::io {

  using Json = nlohmann::json;

  inline constexpr int schema_version = 1;

  ////////////////////////////////////////////////////////////////////////
  // Inputs and hashes
  ////////////////////////////////////////////////////////////////////////

  //! FNV-1a 64-bit hash as 16 lowercase hex digits.
  inline std::string fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  struct Input {
    std::string path;
    std::string content;
    std::string hash;
  };

  inline Input read_input(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::malformed_input, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Input f{path, ss.str(), {}};
    f.hash = fnv1a64(f.content);
    return f;
  }

  inline Json parse_json(std::string const& text, std::string const& what) {
    try {
      return Json::parse(text);
    } catch (Json::exception const& e) {
      fail(ErrorCode::malformed_input, what + ": " + e.what());
    }
  }

  inline Json input_json(Input const& f) {
    return Json{{"path", f.path}, {"fnv1a64", f.hash}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Scalars
  ////////////////////////////////////////////////////////////////////////

  namespace detail {

    inline Json const& field(Json const& j, char const* key, std::string const& what) {
      require(j.is_object() && j.contains(key), ErrorCode::malformed_input, what + " lacks \"" + key + "\"");
      return j.at(key);
    }

    inline std::string digits(Json const& j, std::string const& what) {
      if (j.is_number_integer()) {
        return j.dump();
      }
      require(j.is_string(), ErrorCode::malformed_input, what + " must be an integer or a decimal string");
      std::string s = j.get<std::string>();
      std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
      require(s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos,
              ErrorCode::malformed_input,
              what + ": \"" + s + "\" is not an integer");
      return s[0] == '+' ? s.substr(1) : s;
    }

    inline std::size_t index(Json const& j, std::string const& what) {
      require(j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0),
              ErrorCode::malformed_input,
              what + " must be a nonnegative integer");
      return j.get<std::size_t>();
    }

  }  // namespace detail

  inline BigInt to_bigint(Json const& j, std::string const& what = "integer") {
    return BigInt(detail::digits(j, what));
  }

  inline Json bigint_json(BigInt const& x) {
    return x.str();
  }

  //! Accepts an integer, "p/q", or a ["p", "q"] pair.
  inline Rational to_rational(Json const& j, std::string const& what = "rational") {
    if (j.is_array()) {
      require(j.size() == 2, ErrorCode::malformed_input, what + " pair must have two entries");
      BigInt den = to_bigint(j[1], what);
      require(den != 0, ErrorCode::malformed_input, what + " has zero denominator");
      return Rational(to_bigint(j[0], what), den);
    }
    if (j.is_string()) {
      auto s = j.get<std::string>();
      if (auto slash = s.find('/'); slash != std::string::npos) {
        return to_rational(Json::array({s.substr(0, slash), s.substr(slash + 1)}), what);
      }
    }
    return Rational(to_bigint(j, what));
  }

  inline bool is_exact_scalar(Json const& j) {
    return j.is_number_integer() || j.is_string() || j.is_array();
  }

  inline Json rational_json(Rational const& q) {
    return Json::array({numerator(q).str(), denominator(q).str()});
  }

  //! Non-finite doubles become the strings "inf", "-inf", "nan".
  inline Json number_json(double x) {
    if (std::isnan(x)) {
      return "nan";
    }
    if (std::isinf(x)) {
      return x > 0 ? "inf" : "-inf";
    }
    return x;
  }

  inline double to_double(Json const& j, std::string const& what = "number") {
    if (j.is_number()) {
      return j.get<double>();
    }
    if (j.is_string()) {
      auto const& t = j.get_ref<std::string const&>();
      if (t == "inf" || t == "-inf") {
        return t == "inf" ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      }
      if (t == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
      }
    }
    return as_double(to_rational(j, what));
  }

  ////////////////////////////////////////////////////////////////////////
  // Words
  ////////////////////////////////////////////////////////////////////////

  inline Word to_word(Json const& j, SymmetricGeneratingSet const& S) {
    require(j.is_array(), ErrorCode::malformed_input, "word must be an integer array");
    std::vector<std::int64_t> v;
    for (auto const& x : j) {
      require(x.is_number_integer(), ErrorCode::malformed_input, "word letters must be integers");
      v.push_back(x.get<std::int64_t>());
    }
    return parse_word(v, S);
  }

  //! Comma- or space-separated letters; "" and "e" denote the empty word.
  inline Word parse_word_text(std::string const& text, SymmetricGeneratingSet const& S) {
    std::vector<std::int64_t> v;
    if (text != "e") {
      std::string token;
      auto        flush = [&] {
        if (token.empty()) {
          return;
        }
        try {
          std::size_t used = 0;
          v.push_back(std::stoll(token, &used));
          require(used == token.size(), ErrorCode::malformed_input, "bad letter \"" + token + "\"");
        } catch (std::logic_error const&) {
          fail(ErrorCode::malformed_input, "bad letter \"" + token + "\"");
        }
        token.clear();
      };
      for (char c : text) {
        if (c == ',' || c == ' ') {
          flush();
        } else {
          token.push_back(c);
        }
      }
      flush();
    }
    return parse_word(v, S);
  }

  inline Json word_json(Word const& w) {
    return serialize_word(w);
  }
  inline Json word_json(ReducedWord const& w) {
    return serialize_word(w.word());
  }

  inline Json permutation_json(Permutation const& p) {
    return p.images();
  }

  inline Permutation to_permutation(Json const& j, std::size_t degree, std::string const& what) {
    require(j.is_array() && j.size() == degree,
            ErrorCode::malformed_input,
            what + " must be an array of " + std::to_string(degree) + " images");
    std::vector<std::uint32_t> img;
    for (auto const& x : j) {
      img.push_back(static_cast<std::uint32_t>(detail::index(x, what)));
    }
    return Permutation(std::move(img));
  }

  ////////////////////////////////////////////////////////////////////////
  // Groups
  ////////////////////////////////////////////////////////////////////////

  //! A group file: either the listed generators with inverses appended
  //! (no "inverse_pairing"), or the full symmetric set with its pairing.
  struct GroupFile {
    GroupContext        ctx;
    std::vector<Letter> listed;  // letter of each listed generator
  };

  inline GroupFile parse_group(Json const& j) {
    std::string const what    = "group file";
    auto const&       backend = detail::field(j, "backend", what);
    require(backend.is_string(), ErrorCode::malformed_input, "backend must be a string");
    auto const& gens = detail::field(j, "generators", what);
    require(gens.is_array() && !gens.empty(), ErrorCode::malformed_input, "generators must be a nonempty array");
    std::vector<GroupElement> elements;
    if (backend == "unitriangular") {
      std::size_t const n = detail::index(detail::field(j, "dimension", what), "dimension");
      for (auto const& g : gens) {
        require(g.is_array() && g.size() == n, ErrorCode::malformed_input, "generator must be a square matrix");
        std::vector<std::vector<BigInt>> rows;
        for (auto const& row : g) {
          require(row.is_array(), ErrorCode::malformed_input, "matrix rows must be arrays");
          std::vector<BigInt> r;
          for (auto const& x : row) {
            r.push_back(to_bigint(x, "matrix entry"));
          }
          rows.push_back(std::move(r));
        }
        elements.emplace_back(UnitriangularMatrix::from_rows(rows));
      }
    } else if (backend == "permutation") {
      std::size_t const n = detail::index(detail::field(j, "degree", what), "degree");
      for (auto const& g : gens) {
        elements.emplace_back(to_permutation(g, n, "generator"));
      }
    } else {
      fail(ErrorCode::malformed_input, "unknown backend " + backend.dump());
    }

    GroupFile out;
    if (j.contains("inverse_pairing")) {
      auto const& pairing = j.at("inverse_pairing");
      require(pairing.is_array() && pairing.size() == elements.size(),
              ErrorCode::malformed_input,
              "inverse_pairing needs one 1-based entry per generator");
      std::vector<Letter> inv;
      for (auto const& x : pairing) {
        std::size_t v = detail::index(x, "inverse_pairing entry");
        require(v >= 1 && v <= elements.size(), ErrorCode::malformed_input, "inverse_pairing entry out of range");
        inv.push_back(static_cast<Letter>(v - 1));
      }
      out.ctx = GroupContext(SymmetricGeneratingSet(std::move(inv)), std::move(elements));
      for (Letter a = 0; a < out.ctx.size(); ++a) {
        out.listed.push_back(a);
      }
    } else {
      Letter next = 0;
      for (auto const& g : elements) {
        out.listed.push_back(next);
        next += g.inverse() == g ? 1 : 2;
      }
      out.ctx = GroupContext::from_generators(elements);
    }
    return out;
  }

  //! Writes the images of `listed` letters only, omitting the pairing, when
  //! their inverses are the remaining letters in from_generators order;
  //! otherwise the full symmetric set with an explicit pairing.
  inline Json group_json(GroupContext const& ctx, std::vector<Letter> const& listed = {}) {
    auto const& S       = ctx.generators();
    bool        derived = !listed.empty();
    Letter      next    = 0;
    for (Letter a : listed) {
      derived = derived && a == next;
      next += S.inverse(a) == a ? 1 : 2;
      derived = derived && (S.inverse(a) == a || S.inverse(a) == a + 1);
    }
    derived = derived && next == S.size();
    std::vector<Letter> letters;
    for (Letter a = 0; a < S.size(); ++a) {
      letters.push_back(a);
    }
    if (derived) {
      letters = listed;
    }
    Json j;
    j["schema_version"] = schema_version;
    j["backend"]        = std::string(to_string(ctx.backend()));
    Json gens           = Json::array();
    for (Letter a : letters) {
      auto const& g = ctx.image(a);
      if (ctx.backend() == Backend::unitriangular) {
        Json rows = Json::array();
        for (auto const& r : g.matrix().rows()) {
          Json row = Json::array();
          for (auto const& x : r) {
            bool small = x <= 9'007'199'254'740'991 && x >= -9'007'199'254'740'991;
            row.push_back(small ? Json(x.convert_to<std::int64_t>()) : bigint_json(x));
          }
          rows.push_back(std::move(row));
        }
        gens.push_back(std::move(rows));
      } else {
        gens.push_back(permutation_json(g.permutation()));
      }
    }
    j[ctx.backend() == Backend::unitriangular ? "dimension" : "degree"] = ctx.dimension();
    j["generators"]                                                     = std::move(gens);
    if (!derived) {
      Json pairing = Json::array();
      for (Letter a = 0; a < S.size(); ++a) {
        pairing.push_back(S.inverse(a) + 1);
      }
      j["inverse_pairing"] = std::move(pairing);
    }
    return j;
  }

  //! Letters 0, 2, 4, ... of an alternating generating set.
  inline std::vector<Letter> alternating_listed(GroupContext const& ctx) {
    std::vector<Letter> out;
    for (Letter a = 0; a < ctx.size(); a += 2) {
      out.push_back(a);
    }
    return out;
  }

  //! Per-letter permutations from one permutation per listed generator;
  //! inverse letters receive the inverse permutation.
  inline std::vector<Permutation> expand_listed(GroupFile const&                g,
                                                std::vector<Permutation> const& listed_images,
                                                std::string const&              what) {
    require(listed_images.size() == g.listed.size(),
            ErrorCode::malformed_input,
            what + " needs " + std::to_string(g.listed.size()) + " entries, one per listed generator");
    auto const&              S = g.ctx.generators();
    std::vector<Permutation> out(S.size());
    std::vector<bool>        is_listed(S.size(), false);
    for (Letter a : g.listed) {
      is_listed[a] = true;
    }
    for (std::size_t i = 0; i < g.listed.size(); ++i) {
      Letter a = g.listed[i];
      out[a]   = listed_images[i];
      if (!is_listed[S.inverse(a)]) {
        out[S.inverse(a)] = listed_images[i].inverse();
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Quotient oracles
  ////////////////////////////////////////////////////////////////////////

  //! {"degree", "images": one per listed generator, and either
  //! "subgroup_elements" or "subgroup_generators"}.
  inline FiniteQuotientOracle parse_oracle(Json const& j, GroupFile const& g) {
    std::string const what   = "oracle file";
    std::size_t const degree = detail::index(detail::field(j, "degree", what), "degree");
    auto const&       imgs   = detail::field(j, "images", what);
    require(imgs.is_array(), ErrorCode::malformed_input, "images must be an array");
    std::vector<Permutation> listed;
    for (auto const& p : imgs) {
      listed.push_back(to_permutation(p, degree, "oracle image"));
    }
    auto images = expand_listed(g, listed, "oracle images");
    auto perms  = [&](Json const& arr) {
      require(arr.is_array(), ErrorCode::malformed_input, "subgroup list must be an array");
      std::vector<Permutation> out;
      for (auto const& p : arr) {
        out.push_back(to_permutation(p, degree, "subgroup element"));
      }
      return out;
    };
    bool const has_elements   = j.contains("subgroup_elements");
    bool const has_generators = j.contains("subgroup_generators");
    require(has_elements != has_generators,
            ErrorCode::malformed_input,
            "oracle needs exactly one of subgroup_elements or subgroup_generators");
    if (has_elements) {
      return FiniteQuotientOracle::from_subgroup_elements(std::move(images), perms(j.at("subgroup_elements")));
    }
    return FiniteQuotientOracle::from_subgroup_generators(std::move(images), perms(j.at("subgroup_generators")));
  }

  //! Images for the listed letters and H as a sorted element list.
  inline Json oracle_json(FiniteQuotientOracle const& o, std::vector<Letter> const& listed) {
    Json j;
    j["schema_version"] = schema_version;
    j["degree"]         = o.degree();
    Json imgs           = Json::array();
    for (Letter a : listed) {
      imgs.push_back(permutation_json(o.image(a)));
    }
    j["images"]  = std::move(imgs);
    Json h       = Json::array();
    for (auto const& p : o.subgroup()) {
      h.push_back(permutation_json(p));
    }
    j["subgroup_elements"] = std::move(h);
    return j;
  }

  ////////////////////////////////////////////////////////////////////////
  // Metric spaces
  ////////////////////////////////////////////////////////////////////////

  struct SpaceFile {
    MetricSpace                     space;
    std::optional<ExactMetricSpace> exact;  // when every distance is an integer or rational
  };

  inline SpaceFile parse_space(Json const& j, bool validate = true) {
    std::string const what = "space file";
    std::size_t const n    = detail::index(detail::field(j, "size", what), "size");
    require(n >= 1, ErrorCode::malformed_input, "space must have at least one point");
    auto const& dist = detail::field(j, "distances", what);
    require(dist.is_array(), ErrorCode::malformed_input, "distances must be an array");
    std::optional<std::size_t> base;
    if (j.contains("basepoint") && !j.at("basepoint").is_null()) {
      base = detail::index(j.at("basepoint"), "basepoint");
    }
    bool exact = true;
    for (auto const& x : dist) {
      require(x.is_number() || x.is_string() || x.is_array(), ErrorCode::malformed_input, "distance entry");
      exact = exact && is_exact_scalar(x);
    }
    SpaceFile out;
    if (exact) {
      std::vector<Rational> upper;
      for (auto const& x : dist) {
        upper.push_back(to_rational(x, "distance"));
      }
      out.exact = ExactMetricSpace::from_upper_triangle(n, upper, base);
      out.space = out.exact->to_double();
    } else {
      std::vector<double> upper;
      for (auto const& x : dist) {
        upper.push_back(to_double(x, "distance"));
      }
      out.space = MetricSpace::from_upper_triangle(n, upper, base);
    }
    if (j.contains("coordinates") && !j.at("coordinates").is_null()) {
      auto const& c = j.at("coordinates");
      require(c.is_array() && c.size() == n, ErrorCode::malformed_input, "one coordinate row per point");
      std::vector<std::vector<double>> rows;
      for (auto const& r : c) {
        require(r.is_array(), ErrorCode::malformed_input, "coordinate rows must be arrays");
        std::vector<double> row;
        for (auto const& x : r) {
          row.push_back(to_double(x, "coordinate"));
        }
        rows.push_back(std::move(row));
      }
      out.space.set_coordinates(rows);
      if (out.exact) {
        out.exact->set_coordinates(std::move(rows));
      }
    }
    if (validate) {
      auto rep = validate_metric(out.space);
      require(rep.pass,
              ErrorCode::malformed_input,
              "distances are not a metric (worst triangle violation " + std::to_string(rep.worst_violation) + ")");
    }
    return out;
  }

  template <class T>
  Json space_json(BasicMetricSpace<T> const& X) {
    Json j;
    j["schema_version"] = schema_version;
    j["size"]           = X.size();
    Json d              = Json::array();
    for (auto const& x : X.upper_triangle()) {
      if constexpr (std::is_same_v<T, Rational>) {
        d.push_back(denominator(x) == 1 ? Json(numerator(x).str()) : rational_json(x));
      } else {
        d.push_back(number_json(x));
      }
    }
    j["distances"] = std::move(d);
    if (X.basepoint()) {
      j["basepoint"] = *X.basepoint();
    }
    if (!X.coordinates().empty()) {
      j["coordinates"] = X.coordinates();
    }
    return j;
  }

  ////////////////////////////////////////////////////////////////////////
  // Actions
  ////////////////////////////////////////////////////////////////////////

  struct ActionFile {
    GroupFile          group;
    SpaceFile          space;
    IsometricAction    action;
    std::vector<std::pair<std::string, Input>> referenced;  // (role, file) for parts named by path
  };

  //! "group" and "space" are paths (relative to the action file) or inline
  //! objects; "maps" holds one permutation per listed generator.
  inline ActionFile parse_action(Json const& j, std::filesystem::path const& base_dir) {
    std::string const what = "action file";
    ActionFile        out;
    auto              load = [&](char const* key) {
      auto const& ref = detail::field(j, key, what);
      if (ref.is_string()) {
        auto path = std::filesystem::path(ref.get<std::string>());
        if (path.is_relative()) {
          path = base_dir / path;
        }
        out.referenced.emplace_back(key, read_input(path.string()));
        return parse_json(out.referenced.back().second.content, path.string());
      }
      require(ref.is_object(), ErrorCode::malformed_input, std::string(key) + " must be a path or an object");
      return ref;
    };
    out.group = parse_group(load("group"));
    out.space = parse_space(load("space"));
    auto const& maps = detail::field(j, "maps", what);
    require(maps.is_array(), ErrorCode::malformed_input, "maps must be an array");
    std::vector<Permutation> listed;
    for (auto const& m : maps) {
      listed.push_back(to_permutation(m, out.space.space.size(), "action map"));
    }
    double declared = 0;
    if (j.contains("declared_distortion")) {
      declared = to_double(j.at("declared_distortion"), "declared_distortion");
    }
    out.action = IsometricAction(out.group.ctx, out.space.space, expand_listed(out.group, listed, "action maps"), declared);
    return out;
  }

  //! Maps are written for the letters the group part lists.
  inline Json action_json(IsometricAction const& a, std::vector<Letter> const& listed = {}) {
    Json j;
    j["schema_version"]      = schema_version;
    j["group"]               = group_json(a.group(), listed);
    j["space"]               = space_json(a.space());
    Json maps                = Json::array();
    bool const only_listed   = !j["group"].contains("inverse_pairing");
    for (Letter l = 0; l < a.maps().size(); ++l) {
      if (!only_listed || std::find(listed.begin(), listed.end(), l) != listed.end()) {
        maps.push_back(permutation_json(a.maps()[l]));
      }
    }
    j["maps"]                = std::move(maps);
    j["declared_distortion"] = number_json(a.declared_distortion());
    return j;
  }

  ////////////////////////////////////////////////////////////////////////
  // Reports
  ////////////////////////////////////////////////////////////////////////

  //! Keys are emitted sorted (nlohmann::json objects are ordered maps), so
  //! equal content always serializes to equal bytes.
  class Report {
   public:
    explicit Report(std::string command) {
      _root["schema_version"] = schema_version;
      _root["command"]        = std::move(command);
      _root["config"]         = Json::object();
      _root["inputs"]         = Json::object();
      _root["result"]         = Json::object();
    }

    void config(std::string const& key, Json value) {
      _root["config"][key] = std::move(value);
    }
    void input(std::string const& role, Input const& f) {
      _root["inputs"][role] = input_json(f);
    }
    Json& result() {
      return _root["result"];
    }
    void status(bool pass) {
      _root["status"] = pass ? "pass" : "fail";
    }
    [[nodiscard]] Json const& json() const noexcept {
      return _root;
    }
    [[nodiscard]] std::string dump() const {
      return _root.dump(2) + "\n";
    }

   private:
    Json _root;
  };

}  // namespace collapselab::io

#endif  // COLLAPSELAB_IO_HPP_
