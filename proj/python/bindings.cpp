#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "tantra/engine.hpp"

namespace py = pybind11;
using namespace tantra;

// Ordered keys keep every serialization byte-deterministic.
using cjson = nlohmann::basic_json<std::map>;

namespace {

cjson violations_json(const std::vector<Violation>& vs) {
  cjson out = cjson::array();
  for (const auto& v : vs) {
    out.push_back({{"kind", v.kind}, {"subject", v.subject}, {"detail", v.detail}});
  }
  return out;
}

cjson consistency_json(const ConsistencyReport& report) {
  cjson years = cjson::array();
  for (const auto& y : report.years) {
    cjson row;
    row["fiscal_year"] = y.fiscal_year;
    row["computed"] = y.computed.to_string();
    row["declared"] = y.declared ? cjson(y.declared->to_string()) : cjson(nullptr);
    row["delta"] = y.delta ? cjson(y.delta->to_string()) : cjson(nullptr);
    years.push_back(row);
  }
  return {{"years", years}, {"anomalies", report.anomalies}};
}

cjson sim_json(const DiffusionScenario& s, const DiffusionResult& r) {
  EmergenceMarkers em = emergence_report(r);
  cjson out;
  out["seed"] = s.seed;
  out["steps"] = s.steps;
  out["adoption_series"] = r.adoption_series;
  cjson steps_by_actor;
  for (const auto& [actor, step] : r.adoption_step) {
    steps_by_actor[actor] = step ? cjson(*step) : cjson(nullptr);
  }
  out["adoption_step"] = steps_by_actor;
  out["final_fraction"] = r.final_fraction;
  out["takeoff_step"] = em.takeoff_step ? cjson(*em.takeoff_step) : cjson(nullptr);
  out["saturation"] = em.saturation;
  out["wavefront"] = em.wavefront;
  return out;
}

std::string dump(const cjson& j) { return j.dump(2); }

}  // namespace

PYBIND11_MODULE(_tantra, m) {
  m.doc() = "Ontology-backed sector information engine";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TantraError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Engine>(m, "Engine")
      .def(py::init<>())
      .def("load", [](Engine& e, const std::string& path) { e.load(path); })
      .def("save", [](Engine& e, const std::string& path) { e.save(path); })
      .def("element_count", [](Engine& e) { return e.model.all_elements().size(); })
      .def("load_fixture",
           [](Engine& e, const std::string& data_dir) {
             FixtureReport r = e.sector.load_fixture(data_dir);
             return dump({{"elements", r.elements},
                          {"reifications", r.reifications},
                          {"relators", r.relators},
                          {"relationships", r.relationships},
                          {"categories", r.categories},
                          {"goals", r.goals},
                          {"interventions", r.interventions}});
           })
      .def("declare_element",
           [](Engine& e, const std::string& aspect, const std::string& perspective,
              const std::string& display_name, const std::string& unique_id) {
             AttrMap attrs;
             if (!unique_id.empty()) attrs["unique_id"] = unique_id;
             return e.model
                 .declare_element(require_aspect(aspect), require_perspective(perspective),
                                  display_name, attrs)
                 .id;
           },
           py::arg("aspect"), py::arg("perspective"), py::arg("display_name"),
           py::arg("unique_id") = "")
      .def("reify", [](Engine& e, const std::string& parent, const std::string& child) {
        return e.model.reify(parent, child);
      })
      .def("cell",
           [](Engine& e, const std::string& aspect, const std::string& perspective) {
             cjson out = cjson::array();
             for (const auto& el :
                  e.model.cell(require_aspect(aspect), require_perspective(perspective))) {
               out.push_back({{"id", el.id}, {"display_name", el.display_name}});
             }
             return dump(out);
           })
      .def("validate", [](Engine& e) { return dump(violations_json(e.model.validate())); })
      .def("scan", [](Engine& e) { return dump(violations_json(e.relators.scan())); })
      .def("ingest_schemes",
           [](Engine& e, const std::string& csv_path) {
             IngestResult r = e.sector.ingest_allocations(csv::read_file(csv_path));
             cjson out;
             out["rows"] = r.rows;
             out["consistency"] = consistency_json(r.report);
             return dump(out);
           })
      .def("consistency_report",
           [](Engine& e) { return dump(consistency_json(e.sector.consistency_report())); })
      .def("allocation_summary",
           [](Engine& e, const std::string& fiscal_year, const std::string& group_by) {
             GroupBy g;
             if (group_by == "scheme") {
               g = GroupBy::Scheme;
             } else if (group_by == "category") {
               g = GroupBy::Category;
             } else {
               fail(Err::InvalidArgument, "group_by must be scheme or category");
             }
             cjson out = cjson::array();
             for (const auto& row : e.sector.allocation_summary(fiscal_year, g)) {
               out.push_back({{"key", row.key},
                              {"name", row.name},
                              {"amount", row.amount.to_string()},
                              {"share_pct", row.share_pct.to_string()}});
             }
             return dump(out);
           },
           py::arg("fiscal_year"), py::arg("group_by") = "scheme")
      .def("ingest_separations", [](Engine& e, const std::string& csv_path) {
        return e.separations.ingest_csv(csv::read_file(csv_path));
      })
      .def("separation_index",
           [](Engine& e, const std::string& subject) {
             std::string id = e.separations.resolve_subject(subject);
             return separation_index(e.separations.profile(id)).to_string();
           })
      .def("separation_rank",
           [](Engine& e) {
             cjson out = cjson::array();
             for (const auto& row : e.separations.rank(e.separations.scored_subjects())) {
               const NodeRecord& node = e.store.node(row.subject);
               auto dn = node.attrs.find("display_name");
               out.push_back(
                   {{"subject", row.subject},
                    {"display_name",
                     dn == node.attrs.end() ? "" : std::get<std::string>(dn->second)},
                    {"value", row.value.to_string()}});
             }
             return dump(out);
           })
      .def("entropy",
           [](Engine& e, const std::string& aspect) {
             std::optional<Aspect> scope;
             if (!aspect.empty()) scope = require_aspect(aspect);
             CompletenessDistribution d = entropy_report(e.store, scope);
             cjson bins;
             for (std::size_t i = 0; i < d.counts.size(); ++i) {
               bins[kBinLabels[i]] = d.counts[i];
             }
             return dump({{"elements", d.total}, {"entropy", d.entropy}, {"bins", bins}});
           },
           py::arg("aspect") = "")
      .def("goals",
           [](Engine& e, const std::string& as_of) {
             Date cutoff = Date::parse(as_of);
             cjson out = cjson::array();
             for (const auto& g : e.normative.goals()) {
               GoalEvaluation ev = e.normative.evaluate_goal(g.id, cutoff);
               cjson row;
               row["id"] = g.id;
               row["dimension"] = goal_dimension_name(g.dimension);
               row["statement"] = g.statement;
               row["comparator"] = comparator_name(g.target.cmp);
               row["target"] = g.target.value.to_string();
               row["status"] = goal_status_name(ev.status);
               row["latest"] = ev.latest ? cjson(ev.latest->to_string()) : cjson(nullptr);
               row["observed_on"] =
                   ev.observed_on ? cjson(ev.observed_on->to_string()) : cjson(nullptr);
               out.push_back(row);
             }
             return dump(out);
           },
           py::arg("as_of") = "9999-12-31")
      .def("import_intervention", [](Engine& e, const std::string& json_text) {
        return e.normative.import_intervention_json(json_text);
      })
      .def("export_intervention", [](Engine& e, const std::string& id) {
        return e.normative.export_intervention_json(id);
      })
      .def("validate_intervention", [](Engine& e, const std::string& id) {
        return dump(violations_json(e.normative.validate_intervention(id)));
      });

  m.def(
      "run_diffusion",
      [](const std::string& scenario_json, std::optional<std::uint64_t> seed) {
        DiffusionScenario s = parse_scenario(scenario_json);
        if (seed) s.seed = *seed;
        return dump(sim_json(s, run_diffusion(s)));
      },
      py::arg("scenario_json"), py::arg("seed") = py::none());

  m.def(
      "expected_adoption",
      [](const std::string& scenario_json, int runs, std::optional<std::uint64_t> seed) {
        DiffusionScenario s = parse_scenario(scenario_json);
        if (seed) s.seed = *seed;
        MonteCarlo mc = expected_adoption(s, runs);
        return dump({{"runs", mc.runs},
                     {"mean_final_fraction", mc.mean},
                     {"std_error", mc.std_error}});
      },
      py::arg("scenario_json"), py::arg("runs"), py::arg("seed") = py::none());
}
