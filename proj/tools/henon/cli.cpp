#include "henon/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>

#include "henon/errors.hpp"
#include "henon/exact_arith.hpp"
#include "henon/function_field.hpp"
#include "henon/henon_map.hpp"
#include "henon/local_heights.hpp"
#include "henon/periodic_search.hpp"

namespace henon::cli {

using json = nlohmann::ordered_json;

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (auto& p : parts) {
    const auto first = p.find_first_not_of(" \t");
    const auto last = p.find_last_not_of(" \t");
    p = first == std::string::npos ? std::string() : p.substr(first, last - first + 1);
  }
  return parts;
}

ExitCode exit_code(Outcome outcome) { return outcome == Outcome::Refuted ? kRefuted : kOk; }

namespace {

enum class Format { Json, Text, Csv };

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::vector<BigRational> parse_rational_list(const std::string& text) {
  std::vector<BigRational> out;
  for (const auto& part : split_top_level(text)) out.push_back(parse_rational(part));
  return out;
}

QPoint parse_point(const std::string& text) {
  const auto parts = split_top_level(text);
  if (parts.size() != 2) throw ParseError("a point is written x,y: '" + text + "'");
  return {parse_rational(parts[0]), parse_rational(parts[1])};
}

std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split_top_level(text)) {
    const BigRational q = parse_rational(part);
    if (q.get_den() != 1 || sgn(q) <= 0 || !q.get_num().fits_ulong_p() || !is_prime(q.get_num().get_ui())) {
      throw ParseError("not a prime: '" + part + "'");
    }
    out.push_back(q.get_num().get_ui());
  }
  return out;
}

// -b B for the quadratic family, or -a A with --coeffs b0,...,b_{d-1}.
struct MapSpec {
  std::string b;
  std::string a = "1";
  std::string coeffs;

  QMap build() const {
    if (!coeffs.empty() && !b.empty()) throw ParseError("give either -b or --coeffs, not both");
    if (coeffs.empty() && b.empty()) throw ParseError("missing -b or --coeffs");
    const BigRational av = parse_rational(a);
    if (is_zero(av)) throw ParseError("a must be nonzero");
    if (!b.empty()) return QMap(av, {parse_rational(b), BigRational(0)});
    auto cs = parse_rational_list(coeffs);
    if (cs.size() < 2) throw ParseError("--coeffs needs b_0,...,b_{d-1} with d >= 2");
    return QMap(av, std::move(cs));
  }
};

void add_map_options(CLI::App* cmd, MapSpec& spec) {
  cmd->add_option("-b", spec.b, "parameter b of (x, y) -> (y, x + y^2 + b)");
  cmd->add_option("-a", spec.a, "Jacobian determinant factor a")->capture_default_str();
  cmd->add_option("--coeffs", spec.coeffs, "lower coefficients b0,...,b_{d-1} of monic f");
}

json point_json(const QPoint& p) { return json::array({to_string(p.x), to_string(p.y)}); }

json map_json(const QMap& map) {
  json cs = json::array();
  for (const auto& c : map.coeffs()) cs.push_back(to_string(c));
  return {{"a", to_string(map.a())}, {"coeffs", cs}};
}

json local_json(const LocalHeightValue& lv) {
  json j{{"place", lv.place.name()},
         {"direction", to_string(lv.direction)},
         {"kind", lv.kind()},
         {"value", lv.value()},
         {"radius", lv.radius()}};
  if (const auto* e = std::get_if<ExactLog>(&lv.form)) {
    j["coeff"] = to_string(e->coeff);
    j["base"] = e->base;
    j["escape_step"] = e->escape_step;
  } else if (const auto* iv = std::get_if<Interval>(&lv.form)) {
    j["lo"] = iv->lo;
    j["hi"] = iv->hi;
    j["steps"] = iv->steps;
    j["escape_step"] = iv->escape_step ? json(*iv->escape_step) : json(nullptr);
  } else if (const auto* z = std::get_if<CertifiedZero>(&lv.form)) {
    j["allowance"] = z->allowance;
  }
  return j;
}

json cycle_json(const RationalCycle& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(point_json(p));
  return pts;
}

// ---------------------------------------------------------------------------
// height

struct HeightArgs {
  MapSpec map;
  std::string point;
  double tol = 1e-9;
  std::size_t cap = 64;
  std::size_t max_digits = 1000000;
};

int cmd_height(const HeightArgs& args, Format format, std::ostream& out, std::ostream& err) {
  const QMap map = args.map.build();
  const QPoint pt = parse_point(args.point);
  HeightConfig config;
  config.arch_tolerance = args.tol;
  config.pre_escape_cap = args.cap;
  config.max_digits = args.max_digits;
  CanonicalHeightValue h;
  try {
    h = canonical_height(map, pt, config);
  } catch (const HeightCapExceeded& e) {
    err << "henon: " << e.what() << "\n";
    err << "partial: " << local_json(e.partial()).dump() << "\n";
    return kCapExceeded;
  }
  switch (format) {
    case Format::Json: {
      json locals = json::array();
      for (const auto& lv : h.locals) locals.push_back(local_json(lv));
      json j{{"map", map_json(map)},         {"point", point_json(pt)},
             {"h_plus", h.h_plus},           {"h_minus", h.h_minus},
             {"total", h.total},             {"error_radius", h.error_radius},
             {"locals", locals}};
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      out << "place,direction,kind,value,radius\n";
      for (const auto& lv : h.locals) {
        out << lv.place.name() << "," << to_string(lv.direction) << "," << lv.kind() << ","
            << fmt_double(lv.value()) << "," << fmt_double(lv.radius()) << "\n";
      }
      break;
    case Format::Text:
      out << "h_plus       " << fmt_double(h.h_plus) << "\n";
      out << "h_minus      " << fmt_double(h.h_minus) << "\n";
      out << "total        " << fmt_double(h.total) << "\n";
      out << "error_radius " << fmt_double(h.error_radius) << "\n";
      for (const auto& lv : h.locals) {
        out << "  " << std::left << std::setw(6) << lv.place.name() << std::setw(6) << to_string(lv.direction)
            << std::setw(15) << lv.kind() << fmt_double(lv.value()) << " +- " << fmt_double(lv.radius()) << "\n";
      }
      break;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string b;
  std::string primes;
  bool force_search = false;
};

std::string periods_string(const std::vector<std::size_t>& periods) {
  std::string s;
  for (std::size_t i = 0; i < periods.size(); ++i) s += (i ? " " : "") + std::to_string(periods[i]);
  return s;
}

int cmd_verify(const VerifyArgs& args, Format format, std::ostream& out) {
  const BigRational b = parse_rational(args.b);
  const auto primes = args.primes.empty() ? std::vector<std::uint64_t>{} : parse_primes(args.primes);
  Verdict v = verify_conjecture_for(b, primes, args.force_search);
  // The report always lists the rational periods, so run the search when the
  // filter alone settled the verdict.
  if (!v.cycles && v.outcome == Outcome::VerifiedByFilter) v.cycles = find_rational_periodic_points(b);
  const auto periods = v.periods();
  switch (format) {
    case Format::Json: {
      json filter = nullptr;
      if (!v.filter.is_unfiltered()) filter = json(std::vector<std::uint64_t>(v.filter.allowed().begin(), v.filter.allowed().end()));
      json cycles = json::array();
      if (v.cycles) {
        for (const auto& c : *v.cycles) cycles.push_back(cycle_json(c));
      }
      json j{{"b", to_string(b)},     {"verdict", to_string(v.outcome)}, {"primes", v.primes},
             {"filter", filter},      {"periods", periods},              {"cycles", cycles},
             {"witness", v.witness ? cycle_json(*v.witness) : json(nullptr)}};
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      out << "b,verdict,periods\n" << to_string(b) << "," << to_string(v.outcome) << "," << periods_string(periods) << "\n";
      break;
    case Format::Text:
      out << "b        " << to_string(b) << "\n";
      out << "verdict  " << to_string(v.outcome) << "\n";
      out << "periods  " << (periods.empty() ? "none" : periods_string(periods)) << "\n";
      if (!v.filter.is_unfiltered()) {
        std::string s;
        for (auto n : v.filter.allowed()) s += (s.empty() ? "" : " ") + std::to_string(n);
        out << "filter   " << (s.empty() ? "empty" : s) << "\n";
      }
      break;
  }
  return exit_code(v.outcome);
}

// ---------------------------------------------------------------------------
// batch

struct BatchArgs {
  std::uint64_t max_height = 1;
  unsigned workers = 0;
  std::string checkpoint;
  bool resume = false;
  std::string primes;
  std::size_t chunk = 256;
  std::optional<std::size_t> crash_after;
};

int cmd_batch(const BatchArgs& args, Format format, std::ostream& out, std::ostream& err) {
  BatchOptions opts;
  opts.max_height = args.max_height;
  opts.workers = args.workers;
  if (!args.checkpoint.empty()) opts.checkpoint = args.checkpoint;
  opts.resume = args.resume;
  if (!args.primes.empty()) opts.primes = parse_primes(args.primes);
  opts.chunk = args.chunk;
  opts.crash_after = args.crash_after;
  if (opts.resume && !opts.checkpoint) throw ParseError("--resume needs --checkpoint");
  const BatchReport r = batch_verify(opts);
  if (r.resumed > 0) err << "henon: resumed " << r.resumed << " records from " << args.checkpoint << "\n";
  switch (format) {
    case Format::Json: {
      json refuted = json::array();
      for (const auto& rec : r.refuted_records) {
        refuted.push_back({{"b", to_string(rec.b)}, {"detail", rec.detail}});
      }
      json j{{"max_height", r.max_height},
             {"parameters", r.parameters},
             {"square_denominators", r.square_denominators},
             {"verified_by_filter", r.verified_by_filter},
             {"verified_by_search", r.verified_by_search},
             {"vacuous", r.vacuous},
             {"refuted", r.refuted},
             {"refuted_records", refuted},
             {"digest", r.digest}};
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      out << "max_height,parameters,square_denominators,verified_by_filter,verified_by_search,vacuous,refuted,digest\n";
      out << r.max_height << "," << r.parameters << "," << r.square_denominators << "," << r.verified_by_filter << ","
          << r.verified_by_search << "," << r.vacuous << "," << r.refuted << "," << r.digest << "\n";
      break;
    case Format::Text:
      out << "max_height           " << r.max_height << "\n";
      out << "parameters           " << r.parameters << "\n";
      out << "square_denominators  " << r.square_denominators << "\n";
      out << "verified_by_filter   " << r.verified_by_filter << "\n";
      out << "verified_by_search   " << r.verified_by_search << "\n";
      out << "vacuous              " << r.vacuous << "\n";
      out << "refuted              " << r.refuted << "\n";
      for (const auto& rec : r.refuted_records) out << "  " << rec.line() << "\n";
      out << "digest               " << r.digest << "\n";
      break;
  }
  return r.refuted > 0 ? kRefuted : kOk;
}

// ---------------------------------------------------------------------------
// family

struct FamilyArgs {
  std::string b;
  std::string a = "1";
  std::string coeffs;
  std::string point;
  std::string samples;
  bool isotriviality = false;
};

json divisor_json(const QDivisor& d) {
  json arr = json::array();
  for (const auto& [place, w] : d.weights()) {
    arr.push_back({{"place", place.name()}, {"degree", place.degree()}, {"weight", to_string(w)}});
  }
  return arr;
}

int cmd_family(const FamilyArgs& args, Format format, std::ostream& out, std::ostream& err) {
  if (!args.coeffs.empty() && !args.b.empty()) throw ParseError("give either -b or --coeffs, not both");
  if (args.coeffs.empty() && args.b.empty()) throw ParseError("missing -b or --coeffs");
  std::vector<RatFunc> coeffs;
  if (!args.b.empty()) {
    coeffs = {parse_ratfunc(args.b), RatFunc()};
  } else {
    for (const auto& c : split_top_level(args.coeffs)) coeffs.push_back(parse_ratfunc(c));
    if (coeffs.size() < 2) throw ParseError("--coeffs needs b_0,...,b_{d-1} with d >= 2");
  }
  const RatFunc a = parse_ratfunc(args.a);
  if (is_zero(a)) throw ParseError("a must be nonzero");
  const FFMap map(a, coeffs);
  const auto parts = split_top_level(args.point);
  if (parts.size() != 2) throw ParseError("a point is written x,y: '" + args.point + "'");
  const FFPoint pt{parse_ratfunc(parts[0]), parse_ratfunc(parts[1])};

  std::optional<bool> isotrivial;
  if (args.isotriviality) isotrivial = is_isotrivial(map);

  HeightDivisors div;
  try {
    div = height_divisors(map, pt);
  } catch (const FFCapExceeded& e) {
    err << "henon: " << e.what() << "\n";
    err << "partial D+ = " << e.partial().plus.to_string() << ", D- = " << e.partial().minus.to_string() << "\n";
    return kCapExceeded;
  }
  std::vector<SpecializationRow> rows;
  if (!args.samples.empty()) rows = specialization_experiment(map, pt, parse_rational_list(args.samples));
  const BigRational generic = div.plus.degree() + div.minus.degree();

  switch (format) {
    case Format::Json: {
      json coeffs_j = json::array();
      for (const auto& c : map.coeffs()) coeffs_j.push_back(c.to_string());
      json table = json::array();
      for (const auto& r : rows) {
        table.push_back({{"t0", to_string(r.t0)},
                         {"h_t0", r.h_t0},
                         {"hhat", r.hhat},
                         {"error_radius", r.error_radius},
                         {"ratio", std::isfinite(r.ratio) ? json(r.ratio) : json(nullptr)},
                         {"status", r.status}});
      }
      json j{{"map", {{"a", map.a().to_string()}, {"coeffs", coeffs_j}}},
             {"point", json::array({pt.x.to_string(), pt.y.to_string()})}};
      if (isotrivial) j["isotrivial"] = *isotrivial;
      j["divisor_plus"] = divisor_json(div.plus);
      j["divisor_minus"] = divisor_json(div.minus);
      j["generic_height"] = to_string(generic);
      j["specialization"] = table;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      out << specialization_csv(rows);
      break;
    case Format::Text:
      if (isotrivial) out << "isotrivial      " << (*isotrivial ? "true" : "false") << "\n";
      out << "D+              " << div.plus.to_string() << "\n";
      out << "D-              " << div.minus.to_string() << "\n";
      out << "generic height  " << to_string(generic) << "\n";
      if (!rows.empty()) out << specialization_csv(rows);
      break;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// orbit

struct OrbitArgs {
  MapSpec map;
  std::string point;
  std::size_t cap = 1000;
  bool no_escape = false;
  bool trace = false;
};

int cmd_orbit(const OrbitArgs& args, Format format, std::ostream& out) {
  const QMap map = args.map.build();
  const QPoint pt = parse_point(args.point);
  OrbitOptions<BigRational> opts;
  opts.cap = args.cap;
  opts.retain_trace = args.trace;
  if (!args.no_escape) {
    const QPlace inf = QPlace::archimedean();
    opts.forward_escape = [&map, inf](const QPoint& q) { return in_escape_plus(map, q, inf); };
    opts.backward_escape = [&map, inf](const QPoint& q) { return in_escape_minus(map, q, inf); };
  }
  const auto report = orbit(map, pt, opts);
  std::string status;
  std::optional<std::size_t> step;
  if (const auto* p = std::get_if<Periodic>(&report.status)) {
    status = "periodic";
    step = p->period;
  } else if (const auto* f = std::get_if<EscapedForward>(&report.status)) {
    status = "escaped_forward";
    step = f->step;
  } else if (const auto* bk = std::get_if<EscapedBackward>(&report.status)) {
    status = "escaped_backward";
    step = bk->step;
  } else {
    status = "cap_reached";
  }
  switch (format) {
    case Format::Json: {
      json j{{"map", map_json(map)}, {"point", point_json(pt)}, {"status", status}};
      if (report.period()) {
        j["period"] = *report.period();
      } else if (step) {
        j["step"] = *step;
      }
      json cycle = json::array();
      for (const auto& q : report.cycle) cycle.push_back(point_json(q));
      j["cycle"] = cycle;
      if (args.trace) {
        json tr = json::array();
        for (const auto& q : report.trace) tr.push_back(point_json(q));
        j["trace"] = tr;
      }
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Csv: {
      out << "step,x,y\n";
      const auto& pts = args.trace ? report.trace : report.cycle;
      std::size_t i = args.trace ? 1 : 0;
      for (const auto& q : pts) out << i++ << "," << to_string(q.x) << "," << to_string(q.y) << "\n";
      break;
    }
    case Format::Text:
      out << "status  " << status;
      if (step) out << " " << *step;
      out << "\n";
      for (const auto& q : report.cycle) out << "  (" << to_string(q.x) << ", " << to_string(q.y) << ")\n";
      break;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic dynamics of Henon maps over Q and Q(t)", "henon"};
  app.require_subcommand(1);
  std::string format_name = "json";
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->capture_default_str();

  HeightArgs height;
  auto* h = app.add_subcommand("height", "canonical heights with local breakdown");
  add_map_options(h, height.map);
  h->add_option("-P,--point", height.point, "point x,y")->required();
  h->add_option("--tol", height.tol, "archimedean interval width")->capture_default_str()->check(CLI::PositiveNumber);
  h->add_option("--cap", height.cap, "pre-escape iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  h->add_option("--max-digits", height.max_digits, "coordinate size limit")->capture_default_str();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "period filter and rational periodic points for one b");
  v->add_option("-b", verify.b, "parameter b")->required();
  v->add_option("--primes", verify.primes, "filter primes p1,p2,...");
  v->add_flag("--force-search", verify.force_search, "run the grid search even when the filter decides");

  BatchArgs batch;
  auto* bt = app.add_subcommand("batch", "verify every b with H(b) <= T");
  bt->add_option("--max-height", batch.max_height, "height bound T")->required()->check(CLI::PositiveNumber);
  bt->add_option("--workers", batch.workers, "worker threads (default HENON_WORKERS)")->check(CLI::PositiveNumber);
  bt->add_option("--checkpoint", batch.checkpoint, "append-only record file");
  bt->add_flag("--resume", batch.resume, "continue from the checkpoint");
  bt->add_option("--primes", batch.primes, "filter primes p1,p2,...");
  bt->add_option("--chunk", batch.chunk, "records per flush")->capture_default_str()->check(CLI::PositiveNumber);
  bt->add_option("--crash-after", batch.crash_after)->group("");

  FamilyArgs family;
  auto* f = app.add_subcommand("family", "height divisors and specialization over Q(t)");
  f->add_option("-b", family.b, "b(t)");
  f->add_option("-a", family.a, "a (constant)")->capture_default_str();
  f->add_option("--coeffs", family.coeffs, "b0(t),...,b_{d-1}(t)");
  f->add_option("-P,--point", family.point, "x(t),y(t)")->required();
  f->add_option("--samples", family.samples, "specialization points t0,...");
  f->add_flag("--isotriviality", family.isotriviality, "report whether the family is isotrivial");

  OrbitArgs orb;
  auto* o = app.add_subcommand("orbit", "forward orbit until a cycle closes or an escape region is entered");
  add_map_options(o, orb.map);
  o->add_option("-P,--point", orb.point, "point x,y")->required();
  o->add_option("--cap", orb.cap, "iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  o->add_flag("--no-escape", orb.no_escape, "disable the archimedean escape tests");
  o->add_flag("--trace", orb.trace, "print the forward iterates");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "henon: " << e.what() << "\n";
    return kParseError;
  }
  const Format format = format_name == "text" ? Format::Text : format_name == "csv" ? Format::Csv : Format::Json;

  try {
    if (h->parsed()) return cmd_height(height, format, out, err);
    if (v->parsed()) return cmd_verify(verify, format, out);
    if (bt->parsed()) return cmd_batch(batch, format, out, err);
    if (f->parsed()) return cmd_family(family, format, out, err);
    if (o->parsed()) return cmd_orbit(orb, format, out);
  } catch (const ParseError& e) {
    err << "henon: " << e.what() << "\n";
    return kParseError;
  } catch (const UnsupportedNonConstantA& e) {
    err << "henon: " << e.what() << "\n";
    return kUnsupportedNonConstantA;
  } catch (const CapExceeded& e) {
    err << "henon: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const CheckpointError& e) {
    err << "henon: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "henon: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "henon: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace henon::cli
