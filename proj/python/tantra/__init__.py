"""Ontology-backed sector information engine.

Thin wrapper over the compiled module: structured results cross the
boundary as canonical JSON text and are parsed here once.
"""

import json

from . import _tantra

__all__ = ["Engine", "run_diffusion", "expected_adoption"]


class Engine:
    def __init__(self):
        self._e = _tantra.Engine()

    def load(self, path):
        self._e.load(str(path))

    def save(self, path):
        self._e.save(str(path))

    def element_count(self):
        return self._e.element_count()

    def load_fixture(self, data_dir):
        return json.loads(self._e.load_fixture(str(data_dir)))

    def declare_element(self, aspect, perspective, display_name, unique_id=""):
        return self._e.declare_element(aspect, perspective, display_name, unique_id)

    def reify(self, parent, child):
        return self._e.reify(parent, child)

    def cell(self, aspect, perspective):
        return json.loads(self._e.cell(aspect, perspective))

    def validate(self):
        return json.loads(self._e.validate())

    def scan(self):
        return json.loads(self._e.scan())

    def ingest_schemes(self, csv_path):
        return json.loads(self._e.ingest_schemes(str(csv_path)))

    def consistency_report(self):
        return json.loads(self._e.consistency_report())

    def allocation_summary(self, fiscal_year, group_by="scheme"):
        return json.loads(self._e.allocation_summary(fiscal_year, group_by))

    def ingest_separations(self, csv_path):
        return self._e.ingest_separations(str(csv_path))

    def separation_index(self, subject):
        return self._e.separation_index(subject)

    def separation_rank(self):
        return json.loads(self._e.separation_rank())

    def entropy(self, aspect=""):
        return json.loads(self._e.entropy(aspect))

    def goals(self, as_of="9999-12-31"):
        return json.loads(self._e.goals(as_of))

    def import_intervention(self, data):
        if not isinstance(data, str):
            data = json.dumps(data)
        return self._e.import_intervention(data)

    def export_intervention(self, intervention_id):
        return json.loads(self._e.export_intervention(intervention_id))

    def validate_intervention(self, intervention_id):
        return json.loads(self._e.validate_intervention(intervention_id))


def run_diffusion(scenario, seed=None):
    if not isinstance(scenario, str):
        scenario = json.dumps(scenario)
    return json.loads(_tantra.run_diffusion(scenario, seed))


def expected_adoption(scenario, runs, seed=None):
    if not isinstance(scenario, str):
        scenario = json.dumps(scenario)
    return json.loads(_tantra.expected_adoption(scenario, runs, seed))
