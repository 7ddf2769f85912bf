// Command-line front end over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/carnot.h"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kPass = 0, kFail = 1, kError = 2 };

struct Failure {
  std::string kind;
  std::string message;
};

struct Globals {
  std::string group = "f23";
  std::optional<std::string> eps1, eps2, eps3;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string out;
  std::optional<std::string> format;
  bool no_timing = false;
};

class Context {
 public:
  explicit Context(const Globals& g) {
    check(carnot_context_new(g.group.c_str(), &ctx_));
    check(carnot_context_set_metric(ctx_, g.eps1 ? g.eps1->c_str() : nullptr, g.eps2 ? g.eps2->c_str() : nullptr,
                                    g.eps3 ? g.eps3->c_str() : nullptr));
    check(carnot_context_set_seed(ctx_, g.seed));
    check(carnot_context_set_workers(ctx_, g.workers));
    check(carnot_context_set_timing(ctx_, g.no_timing ? 0 : 1));
  }
  ~Context() { carnot_context_free(ctx_); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
  carnot_context* get() const { return ctx_; }

  static void check(carnot_status s) {
    if (s != CARNOT_OK) throw Failure{carnot_status_name(s), carnot_last_error()};
  }

 private:
  carnot_context* ctx_ = nullptr;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  carnot_string_free(s);
  return out;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Failure{"io", "cannot open " + g.out + " for writing"};
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

std::string format_of(const Globals& g, const char* fallback) { return g.format.value_or(fallback); }

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), rows);
  } else {
    rows.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string as_csv(const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += csv_quote(k) + "," + csv_quote(v) + "\n";
  return out;
}

// JSON objects from the library, printed as JSON or key,value CSV
void emit_json(const Globals& g, const std::string& json_text, const char* fallback = "json") {
  const Json j = Json::parse(json_text);
  emit(g, format_of(g, fallback) == "csv" ? as_csv(j) : j.dump(2));
}

void emit_point(const Globals& g, const std::string& csv) {
  if (format_of(g, "csv") == "csv") return emit(g, csv);
  Json arr = Json::array();
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) arr.push_back(item);
  emit(g, arr.dump());
}

int run_experiment(const Globals& g, const char* name, const Json& params) {
  Context ctx(g);
  char* out = nullptr;
  int passed = 0;
  Context::check(carnot_run_experiment(ctx.get(), name, params.dump().c_str(), &out, &passed));
  emit_json(g, take(out));
  return passed ? kPass : kFail;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic and curve experiments in the step-3 Carnot groups f23 and engel"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--group", g.group, "f23 or engel")->check(CLI::IsMember({"f23", "engel"}));
  app.add_option("--eps1", g.eps1, "first-layer weight (rational)");
  app.add_option("--eps2", g.eps2, "second-layer weight (rational)");
  app.add_option("--eps3", g.eps3, "third-layer weight (rational)");
  app.add_option("--seed", g.seed, "base seed for sampled experiments");
  app.add_option("--workers", g.workers, "worker threads, 0 = all cores");
  app.add_option("--out", g.out, "write output to this file");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timing", g.no_timing, "write wall_ms as 0 for byte-identical reports");

  int status = kPass;
  std::function<void()> action;
  auto sub = [&](CLI::App* parent, const char* name, const char* help) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  std::string x, y, lambda, axis, sigma = "1/2", expect, t, direction = "0,1";
  unsigned depth = 8, transport_depth = 6;
  std::size_t trials = 0, segments = 0;
  std::string tol = "1/4096";
  std::optional<std::string> sigmas;
  bool monte_carlo = false;

  CLI::App* mul = sub(&app, "mul", "group product x * y");
  mul->add_option("--x", x)->required();
  mul->add_option("--y", y)->required();
  mul->callback([&] {
    action = [&] {
      Context ctx(g);
      char* out = nullptr;
      Context::check(carnot_mul(ctx.get(), x.c_str(), y.c_str(), &out));
      emit_point(g, take(out));
    };
  });

  CLI::App* inv = sub(&app, "inv", "group inverse");
  inv->add_option("--x", x)->required();
  inv->callback([&] {
    action = [&] {
      Context ctx(g);
      char* out = nullptr;
      Context::check(carnot_inv(ctx.get(), x.c_str(), &out));
      emit_point(g, take(out));
    };
  });

  CLI::App* dil = sub(&app, "dilate", "dilation delta_lambda(x), lambda > 0");
  dil->add_option("--lambda", lambda)->required();
  dil->add_option("--x", x)->required();
  dil->callback([&] {
    action = [&] {
      Context ctx(g);
      char* out = nullptr;
      Context::check(carnot_dilate(ctx.get(), lambda.c_str(), x.c_str(), &out));
      emit_point(g, take(out));
    };
  });

  CLI::App* norm = sub(&app, "norm", "box quasi-norm of x");
  norm->add_option("--x", x)->required();
  norm->callback([&] {
    action = [&] {
      Context ctx(g);
      char* out = nullptr;
      Context::check(carnot_norm(ctx.get(), x.c_str(), &out));
      emit_json(g, take(out));
    };
  });

  CLI::App* dist = sub(&app, "dist", "d(x, y), or the distance from x to exp(R axis)");
  dist->add_option("--x", x)->required();
  auto* dist_y = dist->add_option("--y", y);
  auto* dist_axis = dist->add_option("--axis", axis, "horizontal direction");
  dist_y->excludes(dist_axis);
  dist->callback([&] {
    action = [&] {
      if (y.empty() == axis.empty()) throw Failure{"usage", "dist needs exactly one of --y or --axis"};
      Context ctx(g);
      char* out = nullptr;
      if (!y.empty())
        Context::check(carnot_dist(ctx.get(), x.c_str(), y.c_str(), &out));
      else
        Context::check(carnot_dist_to_subgroup(ctx.get(), x.c_str(), axis.c_str(), &out));
      emit_json(g, take(out));
    };
  });

  CLI::App* cone = sub(&app, "cone-test", "cone predicates for a point (comma list or JSON array)");
  cone->add_option("--w", x, "point")->required();
  cone->add_option("--axis", axis, "horizontal unit axis, default X2");
  cone->add_option("--sigma", sigma, "opening in (0, 1)");
  cone->add_option("--expect", expect, "inside, outside or undecided; exit 1 on mismatch")
      ->check(CLI::IsMember({"inside", "outside", "undecided"}));
  cone->callback([&] {
    action = [&] {
      Context ctx(g);
      char* out = nullptr;
      Context::check(carnot_cone_test(ctx.get(), x.c_str(), axis.empty() ? nullptr : axis.c_str(), sigma.c_str(), &out));
      const std::string text = take(out);
      const std::string metric = Json::parse(text)["metric"];
      emit_json(g, text);
      if (expect.empty() ? metric == "undecided" : metric != expect) status = kFail;
    };
  });

  CLI::App* curve = sub(&app, "curve", "curve iterates");
  curve->require_subcommand(1);
  CLI::App* build = sub(curve, "build", "intervals and plateau values per level (csv: point dump)");
  build->add_option("--depth", depth)->required();
  build->callback([&] {
    action = [&] {
      Context ctx(g);
      carnot_curve* c = nullptr;
      Context::check(carnot_curve_new(ctx.get(), depth, &c));
      std::unique_ptr<carnot_curve, void (*)(carnot_curve*)> guard(c, carnot_curve_free);
      char* out = nullptr;
      if (format_of(g, "json") == "csv") {
        Context::check(carnot_curve_csv(c, &out));
        emit(g, take(out));
      } else {
        Context::check(carnot_curve_json(c, &out));
        emit(g, Json::parse(take(out)).dump(2));
      }
    };
  });
  CLI::App* verify = sub(curve, "verify", "exact checks on all endpoint pairs");
  verify->add_option("--depth", depth);
  verify->callback([&] { action = [&] { status = run_experiment(g, "curve-verify", {{"depth", depth}}); }; });
  CLI::App* eval = sub(curve, "eval", "curve point at parameter t");
  eval->add_option("--depth", depth);
  eval->add_option("--t", t)->required();
  eval->callback([&] {
    action = [&] {
      Context ctx(g);
      carnot_curve* c = nullptr;
      Context::check(carnot_curve_new(ctx.get(), depth, &c));
      std::unique_ptr<carnot_curve, void (*)(carnot_curve*)> guard(c, carnot_curve_free);
      char* out = nullptr;
      Context::check(carnot_curve_eval(c, t.c_str(), &out));
      emit_point(g, take(out));
    };
  });

  CLI::App* reach = sub(&app, "reach", "cone-control flows must stay in the closure");
  reach->add_option("--sigma", sigmas, "comma list of openings (default 1/4,1/2,3/4)");
  reach->add_option("--segments", segments);
  reach->add_option("--trials", trials);
  reach->callback([&] {
    action = [&] {
      Json p = Json::object();
      if (sigmas) p["sigmas"] = split(*sigmas);
      if (segments) p["segments"] = segments;
      if (trials) p["trials"] = trials;
      status = run_experiment(g, "reach", p);
    };
  });

  CLI::App* inter = sub(&app, "intersect", "exact pair certificate (or --monte-carlo sampling)");
  inter->add_option("--depth", depth);
  inter->add_flag("--monte-carlo", monte_carlo);
  inter->add_option("--sigma", sigma);
  inter->add_option("--trials", trials);
  inter->add_option("--tol", tol);
  inter->add_option("--segments", segments);
  inter->callback([&] {
    action = [&] {
      if (!monte_carlo) {
        status = run_experiment(g, "intersect", {{"depth", depth}});
        return;
      }
      Json p = {{"depth", depth}, {"sigma", sigma}, {"tol", tol}};
      if (trials) p["trials"] = trials;
      if (segments) p["segments"] = segments;
      status = run_experiment(g, "monte-carlo", p);
    };
  });

  CLI::App* transport = sub(&app, "transport", "transport the curve to direction e");
  transport->add_option("--e", direction, "e1,e2")->required();
  transport->add_option("--depth", transport_depth);
  transport->callback([&] {
    action = [&] {
      const auto e = split(direction);
      if (e.size() != 2) throw Failure{"usage", "--e needs two components"};
      status = run_experiment(g, "transport", {{"depth", transport_depth}, {"direction", e}});
    };
  });

  CLI::App* engel = sub(&app, "engel", "curve, reachability and certificate in engel");
  engel->add_option("--depth", depth);
  engel->callback([&] { action = [&] { status = run_experiment(g, "engel", {{"depth", depth}}); }; });

  CLI::App* cal = sub(&app, "calibrate", "sampled triangle-inequality quotient");
  cal->add_option("--trials", trials);
  cal->callback([&] {
    action = [&] {
      Json p = Json::object();
      if (trials) p["trials"] = trials;
      status = run_experiment(g, "calibrate", p);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kError;
  }
  try {
    if (action) action();
  } catch (const Failure& f) {
    std::cerr << Json{{"error", f.kind}, {"message", f.message}}.dump() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return kError;
  }
  return status;
}
