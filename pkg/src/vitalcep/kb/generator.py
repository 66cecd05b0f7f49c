"""Seeded synthetic knowledge-base generator.

Stands in for clinical corpora that cannot be redistributed: same seed,
same store, at any requested scale.
"""

import random

from ..rdf import Triple, TripleStore, literal, iri
from ..rdf.vocab import (
    DISEASE,
    DRUG,
    HAS_SIDE_EFFECT,
    PPG,
    RDF_TYPE,
    RDFS_LABEL,
    RECOMMENDED_MEDICATION,
    TREATED_BY,
)

_EFFECT_POOL = (
    "Nausea",
    "Headache",
    "Dizziness",
    "Fatigue",
    "Rash",
    "Insomnia",
    "Dry Mouth",
    "Drowsiness",
    "Tremors",
    "Palpitations",
    "Diarrhea",
    "Constipation",
    "Blurred Vision",
    "Muscle Pain",
    "Flushing",
    "Loss of Appetite",
)


def generate_kb(diseases: int, drugs: int, seed: int = 0) -> TripleStore:
    """Deterministic synthetic KB with the bundled KB's shape."""
    if diseases < 1 or drugs < 1:
        raise ValueError("disease and drug counts must be >= 1")
    rng = random.Random(seed)
    store = TripleStore()

    drug_terms = []
    for i in range(1, drugs + 1):
        g = iri(f"{PPG}Drug_Synth{i:04d}")
        drug_terms.append(g)
        store.insert(Triple(g, RDF_TYPE, DRUG))
        store.insert(Triple(g, RDFS_LABEL, literal(f"Synthetic Drug {i}")))
        for effect in rng.sample(_EFFECT_POOL, rng.randint(1, 3)):
            store.insert(Triple(g, HAS_SIDE_EFFECT, literal(effect)))

    for i in range(1, diseases + 1):
        d = iri(f"{PPG}Disease_Synth{i:04d}")
        store.insert(Triple(d, RDF_TYPE, DISEASE))
        store.insert(Triple(d, RDFS_LABEL, literal(f"Synthetic Disorder {i}")))
        treats = rng.sample(drug_terms, min(len(drug_terms), rng.randint(1, 3)))
        for g in treats:
            store.insert(Triple(d, TREATED_BY, g))
        for g in treats[: rng.randint(1, len(treats))]:
            store.insert(Triple(d, RECOMMENDED_MEDICATION, g))
    return store
