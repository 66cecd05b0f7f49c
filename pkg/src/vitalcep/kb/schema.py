"""Bundled sensor-network schema subset used for the metrics demo.

A compact class hierarchy in the spirit of the W3C sensor vocabularies:
sensing infrastructure, observations, vital-sign readings, and the
disease/drug side of the knowledge base, with property declarations and a
handful of individuals so every metric has something to measure.
"""

from importlib import resources

from ..rdf import Triple, TripleStore, iri, literal, parse_turtle, serialize_turtle
from ..rdf.vocab import (
    OWL_CLASS,
    OWL_DATATYPE_PROPERTY,
    OWL_OBJECT_PROPERTY,
    PPG,
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
)

# (class, parent or None)
_CLASSES = (
    ("Entity", None),
    ("System", "Entity"),
    ("Platform", "System"),
    ("Sensor", "System"),
    ("PPGSensor", "Sensor"),
    ("ECGSensor", "Sensor"),
    ("RespirationSensor", "Sensor"),
    ("Actuator", "System"),
    ("Procedure", "Entity"),
    ("Deployment", "Entity"),
    ("Stimulus", "Entity"),
    ("FeatureOfInterest", "Entity"),
    ("Patient", "FeatureOfInterest"),
    ("ObservableProperty", "Entity"),
    ("VitalSign", "ObservableProperty"),
    ("HeartRate", "VitalSign"),
    ("PulseRate", "VitalSign"),
    ("RespirationRate", "VitalSign"),
    ("OxygenSaturation", "VitalSign"),
    ("Observation", "Entity"),
    ("PPGData", "Observation"),
    ("Result", "Entity"),
    ("Event", "Entity"),
    ("DetectedEvent", "Event"),
    ("ThresholdEvent", "DetectedEvent"),
    ("CorrelatedEvent", "DetectedEvent"),
    ("MedicalConcept", "Entity"),
    ("Disease", "MedicalConcept"),
    ("CardiacDisease", "Disease"),
    ("RespiratoryDisease", "Disease"),
    ("Drug", "MedicalConcept"),
    ("SideEffect", "MedicalConcept"),
)

_OBJECT_PROPERTIES = (
    "observes",
    "hosts",
    "madeBySensor",
    "hasFeatureOfInterest",
    "treatedBy",
    "recommendedMedication",
    "takesMedication",
    "triggeredBy",
    "detects",
    "implementsProcedure",
)

_DATA_PROPERTIES = (
    "hasTime",
    "hasHR",
    "hasPULSE",
    "hasRESP",
    "hasSpO2",
    "hasHeartRate",
    "hasCondition",
    "hasSideEffect",
    "hasLabel",
    "hasTimestamp",
    "hasUnit",
    "hasValue",
)

# (individual, class)
_INDIVIDUALS = (
    ("Sensor_MAX30100", "PPGSensor"),
    ("Sensor_ECG_1", "ECGSensor"),
    ("Platform_Wristband", "Platform"),
    ("Patient_Demo", "Patient"),
    ("Observation_Demo", "PPGData"),
    ("Disease_Demo_Tachycardia", "CardiacDisease"),
    ("Disease_Demo_Hypoxemia", "RespiratoryDisease"),
    ("Drug_Demo_Metoprolol", "Drug"),
    ("Event_Demo", "ThresholdEvent"),
)


def build_schema_store() -> TripleStore:
    store = TripleStore()
    for name, parent in _CLASSES:
        c = iri(PPG + name)
        store.insert(Triple(c, RDF_TYPE, OWL_CLASS))
        if parent:
            store.insert(Triple(c, RDFS_SUBCLASSOF, iri(PPG + parent)))
    for name in _OBJECT_PROPERTIES:
        store.insert(Triple(iri(PPG + name), RDF_TYPE, OWL_OBJECT_PROPERTY))
    for name in _DATA_PROPERTIES:
        store.insert(Triple(iri(PPG + name), RDF_TYPE, OWL_DATATYPE_PROPERTY))
    for name, cls in _INDIVIDUALS:
        ind = iri(PPG + name)
        store.insert(Triple(ind, RDF_TYPE, iri(PPG + cls)))
        store.insert(Triple(ind, RDFS_LABEL, literal(name.replace("_", " "))))
    return store


def load_schema_ontology() -> TripleStore:
    text = resources.files("vitalcep.kb").joinpath("data/ssn_schema.ttl").read_text("utf-8")
    return TripleStore(parse_turtle(text))


def schema_turtle() -> str:
    return serialize_turtle(build_schema_store())
