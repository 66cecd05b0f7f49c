"""Bundled query texts: the disease/drug lookups and the benchmark set."""

from importlib import resources

_PREAMBLE = """\
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
PREFIX SSN: <http://healthcare.org/ppg/>
PREFIX Drug: <http://healthcare.org/ppg/>
"""

# Patients over 120 BPM with a tachycardia condition, joined to the side
# effects of what they take.
PATIENT_SIDE_EFFECT_QUERY = _PREAMBLE + """\
SELECT ?patient ?sideEffect WHERE {
  ?patient SSN:hasHeartRate ?hr .
  ?patient SSN:hasCondition "Tachycardia" .
  ?patient SSN:takesMedication ?medication .
  ?medication Drug:hasSideEffect ?sideEffect .
  FILTER(?hr > 120)
}
"""

# First nine disease-drug treatment pairs.
DISEASE_DRUG_QUERY = _PREAMBLE + """\
SELECT ?disease ?drug WHERE {
  ?disease rdf:type SSN:Disease .
  ?drug rdf:type SSN:Drug .
  ?disease SSN:treatedBy ?drug .
} LIMIT 9
"""

# Medications recommended for hypoxemia and their side effects.
HYPOXEMIA_QUERY = _PREAMBLE + """\
SELECT ?medication ?sideEffect WHERE {
  ?disease rdf:type SSN:Disease ;
    rdfs:label "Hypoxemia" ;
    SSN:recommendedMedication ?medication .
  ?medication SSN:hasSideEffect ?sideEffect .
}
"""

BENCHMARK_QUERY_NAMES = ("q1", "q2", "q3", "q4", "q5")


def load_benchmark_query(name: str) -> str:
    return (
        resources.files("vitalcep.kb").joinpath(f"data/queries/{name}.rq").read_text("utf-8")
    )


def load_benchmark_queries() -> list[tuple[str, str]]:
    return [(name, load_benchmark_query(name)) for name in BENCHMARK_QUERY_NAMES]
