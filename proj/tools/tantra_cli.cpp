#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tantra/engine.hpp"

namespace {

using namespace tantra;
using cjson = nlohmann::basic_json<std::map>;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// k=v attribute with scalar coercion: integer, decimal, boolean, date,
// then string.
std::pair<std::string, AttrValue> parse_attr(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(Err::InvalidArgument, "attribute '" + text + "' is not in k=v form");
  }
  std::string key = text.substr(0, eq);
  std::string raw = text.substr(eq + 1);
  if (!raw.empty() && raw.find_first_not_of("+-0123456789") == std::string::npos &&
      raw.find_first_of("0123456789") != std::string::npos) {
    try {
      return {key, static_cast<std::int64_t>(std::stoll(raw))};
    } catch (...) {
    }
  }
  if (!raw.empty() && raw.find_first_not_of("+-.0123456789") == std::string::npos) {
    try {
      return {key, Decimal::parse(raw)};
    } catch (const TantraError&) {
    }
  }
  if (raw == "true") return {key, true};
  if (raw == "false") return {key, false};
  if (raw.size() == 10 && raw[4] == '-' && raw[7] == '-') {
    try {
      return {key, Date::parse(raw)};
    } catch (const TantraError&) {
    }
  }
  return {key, raw};
}

struct Cli {
  std::string store_path = "tantra.json";
  std::string format = "text";

  bool json() const { return format == "json"; }

  Engine engine;
  bool dirty = false;

  void load_if_present() {
    if (std::filesystem::exists(store_path)) engine.load(store_path);
  }
  void load_required() { engine.load(store_path); }
  void save_if_dirty() {
    if (dirty) engine.save(store_path);
  }
};

void print_json(const cjson& j) { std::cout << j.dump(2) << "\n"; }

cjson consistency_json(const ConsistencyReport& report) {
  cjson years = cjson::array();
  for (const auto& y : report.years) {
    cjson row;
    row["fiscal_year"] = y.fiscal_year;
    row["computed"] = y.computed.to_string();
    row["declared"] = y.declared ? cjson(y.declared->to_string()) : cjson(nullptr);
    row["delta"] = y.delta ? cjson(y.delta->to_string()) : cjson(nullptr);
    years.push_back(std::move(row));
  }
  cjson j;
  j["years"] = std::move(years);
  j["anomalies"] = report.anomalies;
  return j;
}

void print_consistency_text(const ConsistencyReport& report) {
  for (const auto& y : report.years) {
    std::cout << "fiscal year " << y.fiscal_year << ": computed " << y.computed.to_string();
    if (y.declared) std::cout << " declared " << y.declared->to_string();
    if (y.delta) std::cout << " delta " << y.delta->to_string();
    std::cout << "\n";
  }
  if (!report.anomalies.empty()) {
    std::cout << "anomalies:\n";
    for (const auto& a : report.anomalies) std::cout << "  " << a << "\n";
  }
}

int cmd_ingest_schemes(Cli& cli, const std::string& path) {
  IngestResult result = cli.engine.sector.ingest_allocations(csv::read_file(path));
  cli.dirty = true;
  cli.save_if_dirty();
  if (cli.json()) {
    cjson j = consistency_json(result.report);
    j["rows"] = result.rows;
    print_json(j);
  } else {
    std::cout << "rows: " << result.rows << "\n";
    print_consistency_text(result.report);
  }
  return result.report.anomalies.empty() ? 0 : 1;
}

int cmd_ingest_separations(Cli& cli, const std::string& path) {
  int rows = cli.engine.separations.ingest_csv(csv::read_file(path));
  cli.dirty = true;
  cli.save_if_dirty();
  if (cli.json()) {
    print_json(cjson{{"rows", rows}});
  } else {
    std::cout << "rows: " << rows << "\n";
  }
  return 0;
}

int cmd_ingest_markers(Cli& cli, const std::string& path) {
  csv::Table table = csv::read_file(path);
  for (const char* col : {"marker_id", "date", "value"}) {
    if (table.column(col) < 0) fail(Err::SchemaMismatch, "missing column '" + std::string(col) + "'");
  }
  int cm = table.column("marker_id"), cd = table.column("date"), cv = table.column("value");
  int rows = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::string where = "line " + std::to_string(table.line_numbers[i]);
    if (row.size() != table.header.size()) {
      fail(Err::SchemaMismatch, where + ": expected " + std::to_string(table.header.size()) +
                                    " fields, got " + std::to_string(row.size()));
    }
    try {
      cli.engine.normative.record_marker(row[static_cast<std::size_t>(cm)],
                                         Date::parse(row[static_cast<std::size_t>(cd)]),
                                         Decimal::parse(row[static_cast<std::size_t>(cv)]));
    } catch (const TantraError& e) {
      fail(e.code(), where + ": " + e.message());
    }
    ++rows;
  }
  cli.dirty = true;
  cli.save_if_dirty();
  if (cli.json()) {
    print_json(cjson{{"rows", rows}});
  } else {
    std::cout << "rows: " << rows << "\n";
  }
  return 0;
}

int cmd_report_entropy(Cli& cli, const std::string& aspect) {
  std::optional<Aspect> scope;
  if (!aspect.empty()) scope = require_aspect(aspect);
  CompletenessDistribution dist = entropy_report(cli.engine.store, scope);
  if (cli.json()) {
    cjson bins = cjson::array();
    for (std::size_t i = 0; i < dist.counts.size(); ++i) {
      bins.push_back(cjson{{"range", kBinLabels[i]}, {"count", dist.counts[i]}});
    }
    cjson j;
    j["scope"] = aspect.empty() ? "model" : aspect;
    j["elements"] = dist.total;
    j["bins"] = std::move(bins);
    j["entropy"] = fixed(dist.entropy, 3);
    print_json(j);
  } else {
    std::cout << "scope: " << (aspect.empty() ? "model" : aspect) << "\n";
    std::cout << "elements: " << dist.total << "\n";
    std::cout << "entropy: " << fixed(dist.entropy, 3) << "\n";
    for (std::size_t i = 0; i < dist.counts.size(); ++i) {
      if (dist.counts[i] == 0) continue;
      std::cout << "  " << kBinLabels[i] << ": " << dist.counts[i] << "\n";
    }
  }
  return 0;
}

int cmd_report_separations(Cli& cli, const std::string& kind_name) {
  std::optional<SeparationKind> kind;
  if (!kind_name.empty()) kind = require_separation_kind(kind_name);
  auto subjects = cli.engine.separations.scored_subjects();
  auto ranked = cli.engine.separations.rank(subjects, kind);
  if (cli.json()) {
    cjson rows = cjson::array();
    for (const auto& r : ranked) {
      const NodeRecord& n = cli.engine.store.node(r.subject);
      auto it = n.attrs.find("display_name");
      std::string name =
          it != n.attrs.end() && std::holds_alternative<std::string>(it->second)
              ? std::get<std::string>(it->second)
              : r.subject;
      rows.push_back(cjson{{"subject", r.subject}, {"name", name}, {"value", r.value.to_string()}});
    }
    cjson j;
    j["kind"] = kind_name.empty() ? "index" : kind_name;
    j["subjects"] = std::move(rows);
    print_json(j);
  } else {
    for (const auto& r : ranked) {
      const NodeRecord& n = cli.engine.store.node(r.subject);
      auto it = n.attrs.find("display_name");
      std::string name =
          it != n.attrs.end() && std::holds_alternative<std::string>(it->second)
              ? std::get<std::string>(it->second)
              : r.subject;
      std::cout << r.value.to_string() << "  " << name << "\n";
    }
  }
  return 0;
}

int cmd_report_allocations(Cli& cli, const std::string& fy, const std::string& group_by) {
  GroupBy group;
  if (group_by == "scheme") {
    group = GroupBy::Scheme;
  } else if (group_by == "category") {
    group = GroupBy::Category;
  } else {
    fail(Err::InvalidArgument, "--group-by must be 'scheme' or 'category'");
  }
  auto rows = cli.engine.sector.allocation_summary(fy, group);
  if (cli.json()) {
    cjson out = cjson::array();
    for (const auto& r : rows) {
      out.push_back(cjson{{"key", r.key},
                          {"name", r.name},
                          {"amount", r.amount.to_string()},
                          {"share_pct", r.share_pct.to_string()}});
    }
    print_json(cjson{{"fiscal_year", fy}, {"group_by", group_by}, {"rows", out}});
  } else {
    for (const auto& r : rows) {
      std::cout << r.key << "  " << r.amount.to_string() << "  " << r.share_pct.to_string()
                << "%  " << r.name << "\n";
    }
  }
  return 0;
}

int cmd_report_goals(Cli& cli, const std::string& as_of_text) {
  Date as_of = Date::parse(as_of_text);
  auto goals = cli.engine.normative.goals();
  if (cli.json()) {
    cjson out = cjson::array();
    for (const auto& g : goals) {
      GoalEvaluation ev = cli.engine.normative.evaluate_goal(g.id, as_of);
      cjson row;
      row["id"] = g.id;
      row["dimension"] = goal_dimension_name(g.dimension);
      row["statement"] = g.statement;
      row["metric"] = g.metric;
      row["comparator"] = comparator_name(g.target.cmp);
      row["target"] = g.target.value.to_string();
      row["unit"] = g.target.unit;
      row["status"] = goal_status_name(ev.status);
      row["latest"] = ev.latest ? cjson(ev.latest->to_string()) : cjson(nullptr);
      row["observed_on"] = ev.observed_on ? cjson(ev.observed_on->to_string()) : cjson(nullptr);
      out.push_back(std::move(row));
    }
    print_json(cjson{{"as_of", as_of.to_string()}, {"goals", out}});
  } else {
    for (const auto& g : goals) {
      GoalEvaluation ev = cli.engine.normative.evaluate_goal(g.id, as_of);
      std::cout << goal_dimension_name(g.dimension) << "  " << g.statement << "  "
                << comparator_name(g.target.cmp) << " " << g.target.value.to_string() << "  "
                << goal_status_name(ev.status);
      if (ev.latest) {
        std::cout << " (latest " << ev.latest->to_string() << " on " << ev.observed_on->to_string()
                  << ")";
      }
      std::cout << "\n";
    }
  }
  return 0;
}

cjson result_json(const DiffusionResult& result, const DiffusionScenario& scenario) {
  EmergenceMarkers markers = emergence_report(result);
  cjson steps = cjson::object();
  for (const auto& [actor, step] : result.adoption_step) {
    steps[actor] = step ? cjson(*step) : cjson(nullptr);
  }
  cjson j;
  j["seed"] = scenario.seed;
  j["steps"] = scenario.steps;
  j["adoption_series"] = result.adoption_series;
  j["adoption_step"] = std::move(steps);
  j["final_fraction"] = result.final_fraction;
  j["takeoff_step"] = markers.takeoff_step ? cjson(*markers.takeoff_step) : cjson(nullptr);
  j["saturation"] = markers.saturation;
  j["wavefront"] = markers.wavefront;
  return j;
}

int cmd_sim(Cli& cli, const std::string& scenario_path, int runs, std::optional<std::uint64_t> seed) {
  DiffusionScenario scenario = parse_scenario(read_text_file(scenario_path));
  if (seed) scenario.seed = *seed;
  if (runs > 1) {
    MonteCarlo mc = expected_adoption(scenario, runs);
    if (cli.json()) {
      cjson j;
      j["runs"] = mc.runs;
      j["seed_start"] = scenario.seed;
      j["mean_final_fraction"] = mc.mean;
      j["std_error"] = mc.std_error;
      print_json(j);
    } else {
      std::cout << "runs: " << mc.runs << "\n";
      std::cout << "mean_final_fraction: " << fixed(mc.mean, 6) << "\n";
      std::cout << "std_error: " << fixed(mc.std_error, 6) << "\n";
    }
    return 0;
  }
  DiffusionResult result = run_diffusion(scenario);
  if (cli.json()) {
    print_json(result_json(result, scenario));
  } else {
    EmergenceMarkers markers = emergence_report(result);
    std::cout << "series:";
    for (double v : result.adoption_series) std::cout << " " << fixed(v, 6);
    std::cout << "\n";
    std::cout << "final_fraction: " << fixed(result.final_fraction, 6) << "\n";
    std::cout << "takeoff_step: "
              << (markers.takeoff_step ? std::to_string(*markers.takeoff_step) : "never") << "\n";
    std::cout << "saturation: " << fixed(markers.saturation, 6) << "\n";
    for (const auto& [actor, step] : result.adoption_step) {
      std::cout << "  " << actor << ": " << (step ? "step " + std::to_string(*step) : "never")
                << "\n";
    }
  }
  return 0;
}

int cmd_validate(Cli& cli) {
  auto violations = cli.engine.model.validate();
  auto scan = cli.engine.relators.scan();
  violations.insert(violations.end(), scan.begin(), scan.end());
  if (cli.json()) {
    cjson out = cjson::array();
    for (const auto& v : violations) {
      out.push_back(cjson{{"kind", v.kind}, {"subject", v.subject}, {"detail", v.detail}});
    }
    print_json(cjson{{"violations", out}});
  } else {
    if (violations.empty()) {
      std::cout << "model valid\n";
    } else {
      for (const auto& v : violations) {
        std::cout << v.kind << "  " << v.subject << "  " << v.detail << "\n";
      }
    }
  }
  return violations.empty() ? 0 : 1;
}

int cmd_toc(Cli& cli, const std::string& file) {
  std::string id = cli.engine.normative.import_intervention_json(read_text_file(file));
  auto deficiencies = cli.engine.normative.validate_intervention(id);
  cli.dirty = true;
  cli.save_if_dirty();
  if (cli.json()) {
    cjson out = cjson::array();
    for (const auto& d : deficiencies) {
      out.push_back(cjson{{"kind", d.kind}, {"subject", d.subject}, {"detail", d.detail}});
    }
    print_json(cjson{{"id", id}, {"deficiencies", out}});
  } else {
    std::cout << "intervention: " << id << "\n";
    for (const auto& d : deficiencies) {
      std::cout << "  " << d.kind << "  " << d.detail << "\n";
    }
  }
  return deficiencies.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-backed sector information engine"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--store", cli.store_path, "Graph store path (default tantra.json)");
  app.add_option("--format", cli.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Ingest CSV data into the store");
  std::string schemes_path, separations_path, markers_path;
  auto* opt_schemes = ingest->add_option("--schemes", schemes_path, "Scheme allocation CSV");
  auto* opt_separations = ingest->add_option("--separations", separations_path, "Separation score CSV");
  auto* opt_markers = ingest->add_option("--markers", markers_path, "Marker observation CSV");

  // report
  auto* report = app.add_subcommand("report", "Deterministic reports over the store");
  report->require_subcommand(1);
  auto* rep_entropy = report->add_subcommand("entropy", "Completeness entropy distribution");
  std::string aspect_scope;
  rep_entropy->add_option("--aspect", aspect_scope, "Restrict to one aspect");
  auto* rep_separations = report->add_subcommand("separations", "Ranked separation indices");
  std::string sep_kind;
  rep_separations->add_option("--kind", sep_kind, "Rank by a single separation kind");
  auto* rep_allocations = report->add_subcommand("allocations", "Allocation summary for a year");
  std::string fiscal_year, group_by = "scheme";
  rep_allocations->add_option("--fy", fiscal_year, "Fiscal year, e.g. 2019-20")->required();
  rep_allocations->add_option("--group-by", group_by, "scheme or category");
  auto* rep_goals = report->add_subcommand("goals", "Goal status against latest observations");
  std::string as_of = "9999-12-31";
  rep_goals->add_option("--as-of", as_of, "Evaluate using observations up to this date");

  // sim
  auto* sim = app.add_subcommand("sim", "Run the adoption diffusion simulator");
  std::string scenario_path;
  int runs = 1;
  std::uint64_t seed_override = 0;
  sim->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--runs", runs, "Monte-Carlo run count")->check(CLI::PositiveNumber);
  auto* opt_seed = sim->add_option("--seed", seed_override, "Override the scenario seed");

  // model
  auto* model = app.add_subcommand("model", "Model operations");
  model->require_subcommand(1);

  auto* m_add = model->add_subcommand("add-element", "Declare an element");
  std::string el_aspect, el_perspective, el_name;
  std::vector<std::string> el_attrs;
  m_add->add_option("--aspect", el_aspect)->required();
  m_add->add_option("--perspective", el_perspective)->required();
  m_add->add_option("--name", el_name)->required();
  m_add->add_option("--attr", el_attrs, "Attribute k=v, repeatable");

  auto* m_reify = model->add_subcommand("reify", "Link parent to child one level deeper");
  std::string reify_parent, reify_child;
  m_reify->add_option("--parent", reify_parent)->required();
  m_reify->add_option("--child", reify_child)->required();

  auto* m_relator = model->add_subcommand("relator", "Create a relator over mediated elements");
  std::string relator_kind;
  std::vector<std::string> mediated;
  m_relator->add_option("--kind", relator_kind)->required();
  m_relator->add_option("--mediated", mediated, "Mediated element id, repeatable")->required();

  auto* m_relate = model->add_subcommand("relate", "Found a relationship on a relator");
  std::string relate_relator, relate_a, relate_b, relate_kind;
  m_relate->add_option("--relator", relate_relator)->required();
  m_relate->add_option("--a", relate_a)->required();
  m_relate->add_option("--b", relate_b)->required();
  m_relate->add_option("--kind", relate_kind)->required();

  auto* m_goal = model->add_subcommand("goal", "Define a scorecard goal");
  std::string goal_dimension, goal_statement, goal_metric, goal_target, goal_unit, goal_epsilon;
  std::int64_t review_days = 365;
  m_goal->add_option("--dimension", goal_dimension)->required();
  m_goal->add_option("--statement", goal_statement)->required();
  m_goal->add_option("--metric", goal_metric, "Metric element id, unique_id or display name")
      ->required();
  m_goal->add_option("--target", goal_target, "Comparator and value, e.g. '>= 2.0'")->required();
  m_goal->add_option("--unit", goal_unit);
  m_goal->add_option("--epsilon", goal_epsilon, "Tolerance for ~= targets");
  m_goal->add_option("--review-days", review_days);

  auto* m_toc = model->add_subcommand("toc", "Import a Theory-of-Change intervention");
  std::string toc_file;
  m_toc->add_option("--file", toc_file, "Intervention JSON file")->required();

  auto* m_validate = model->add_subcommand("validate", "Report structural violations");

  auto* m_fixture = model->add_subcommand("load-fixture", "Load the sector fixture");
  std::string data_dir;
  m_fixture->add_option("--data", data_dir, "Fixture directory (default $TANTRA_DATA_DIR or ./data)");

  // Allow --store/--format anywhere on the command line.
  std::function<void(CLI::App*)> allow_globals = [&](CLI::App* cmd) {
    for (CLI::App* sub : cmd->get_subcommands({})) {
      sub->fallthrough();
      allow_globals(sub);
    }
  };
  allow_globals(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) {
      int given = (opt_schemes->count() ? 1 : 0) + (opt_separations->count() ? 1 : 0) +
                  (opt_markers->count() ? 1 : 0);
      if (given != 1) {
        std::cerr << "error: ingest needs exactly one of --schemes, --separations, --markers\n";
        return 2;
      }
      cli.load_if_present();
      if (opt_schemes->count()) return cmd_ingest_schemes(cli, schemes_path);
      if (opt_separations->count()) return cmd_ingest_separations(cli, separations_path);
      return cmd_ingest_markers(cli, markers_path);
    }
    if (report->parsed()) {
      cli.load_required();
      if (rep_entropy->parsed()) return cmd_report_entropy(cli, aspect_scope);
      if (rep_separations->parsed()) return cmd_report_separations(cli, sep_kind);
      if (rep_allocations->parsed()) return cmd_report_allocations(cli, fiscal_year, group_by);
      return cmd_report_goals(cli, as_of);
    }
    if (sim->parsed()) {
      return cmd_sim(cli, scenario_path, runs,
                     opt_seed->count() ? std::optional<std::uint64_t>(seed_override) : std::nullopt);
    }
    if (model->parsed()) {
      cli.load_if_present();
      if (m_add->parsed()) {
        AttrMap attrs;
        for (const auto& a : el_attrs) attrs.insert(parse_attr(a));
        TantraElement el = cli.engine.model.declare_element(
            require_aspect(el_aspect), require_perspective(el_perspective), el_name, attrs);
        cli.dirty = true;
        cli.save_if_dirty();
        std::cout << el.id << "\n";
        return 0;
      }
      if (m_reify->parsed()) {
        std::string edge = cli.engine.model.reify(reify_parent, reify_child);
        cli.dirty = true;
        cli.save_if_dirty();
        std::cout << edge << "\n";
        return 0;
      }
      if (m_relator->parsed()) {
        Relator r = cli.engine.relators.create_relator(
            relator_kind, std::set<std::string>(mediated.begin(), mediated.end()));
        cli.dirty = true;
        cli.save_if_dirty();
        std::cout << r.id << "\n";
        return 0;
      }
      if (m_relate->parsed()) {
        MaterialRelationship r =
            cli.engine.relators.found_relationship(relate_relator, relate_a, relate_b, relate_kind);
        cli.dirty = true;
        cli.save_if_dirty();
        std::cout << r.id << "\n";
        return 0;
      }
      if (m_goal->parsed()) {
        auto space = goal_target.find(' ');
        if (space == std::string::npos) {
          fail(Err::InvalidComparator, "--target must look like '>= 2.0'");
        }
        GoalTarget target;
        target.cmp = require_comparator(goal_target.substr(0, space));
        target.value = Decimal::parse(goal_target.substr(space + 1));
        if (!goal_epsilon.empty()) target.epsilon = Decimal::parse(goal_epsilon);
        target.unit = goal_unit;
        std::string metric = cli.engine.normative.resolve_metric(goal_metric);
        Goal g = cli.engine.normative.define_goal(require_goal_dimension(goal_dimension),
                                                  goal_statement, metric, target, review_days);
        cli.dirty = true;
        cli.save_if_dirty();
        std::cout << g.id << "\n";
        return 0;
      }
      if (m_toc->parsed()) return cmd_toc(cli, toc_file);
      if (m_validate->parsed()) return cmd_validate(cli);
      if (m_fixture->parsed()) {
        if (data_dir.empty()) {
          const char* env = std::getenv("TANTRA_DATA_DIR");
          data_dir = env && *env ? env : "data";
        }
        FixtureReport rep = cli.engine.sector.load_fixture(data_dir);
        cli.dirty = true;
        cli.save_if_dirty();
        if (cli.json()) {
          cjson j;
          j["elements"] = rep.elements;
          j["reifications"] = rep.reifications;
          j["relators"] = rep.relators;
          j["relationships"] = rep.relationships;
          j["categories"] = rep.categories;
          j["goals"] = rep.goals;
          j["interventions"] = rep.interventions;
          print_json(j);
        } else {
          std::cout << "elements: " << rep.elements << "\n";
          std::cout << "reifications: " << rep.reifications << "\n";
          std::cout << "relators: " << rep.relators << "\n";
          std::cout << "relationships: " << rep.relationships << "\n";
          std::cout << "categories: " << rep.categories << "\n";
          std::cout << "goals: " << rep.goals << "\n";
          std::cout << "interventions: " << rep.interventions << "\n";
        }
        return 0;
      }
    }
  } catch (const TantraError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no command\n";
  return 2;
}
