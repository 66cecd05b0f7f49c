"""Namespace IRIs and the vocabulary terms used across the pipeline."""

from .terms import iri

PPG = "http://healthcare.org/ppg/"
# Capitalised variant seen in older exports; folded to PPG on input when the
# compatibility aliases are enabled.
PPG_LEGACY = "http://Healthcare.org/ppg/"

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

# Default alias map: IRI prefix rewrites applied by parsers on request.
NAMESPACE_ALIASES = {PPG_LEGACY: PPG}

# Prefixes used by the Turtle serializer and bundled query files. The drug
# vocabulary shares the PPG namespace so the same triples answer queries
# written against either prefix.
STANDARD_PREFIXES = {
    "ssn": PPG,
    "drug": PPG,
    "rdf": RDF,
    "rdfs": RDFS,
    "owl": OWL,
    "xsd": XSD,
}

RDF_TYPE = iri(RDF + "type")
RDFS_LABEL = iri(RDFS + "label")
RDFS_SUBCLASSOF = iri(RDFS + "subClassOf")
OWL_CLASS = iri(OWL + "Class")
RDFS_CLASS = iri(RDFS + "Class")
OWL_OBJECT_PROPERTY = iri(OWL + "ObjectProperty")
OWL_DATATYPE_PROPERTY = iri(OWL + "DatatypeProperty")

# PPG sensor readings
PPG_DATA = iri(PPG + "PPGData")
HAS_TIME = iri(PPG + "hasTime")
HAS_HR = iri(PPG + "hasHR")
HAS_PULSE = iri(PPG + "hasPULSE")
HAS_RESP = iri(PPG + "hasRESP")
HAS_SPO2 = iri(PPG + "hasSpO2")

# Patient / condition graph
PATIENT = iri(PPG + "Patient")
HAS_HEART_RATE = iri(PPG + "hasHeartRate")
HAS_CONDITION = iri(PPG + "hasCondition")
TAKES_MEDICATION = iri(PPG + "takesMedication")

# Disease / drug knowledge base
DISEASE = iri(PPG + "Disease")
DRUG = iri(PPG + "Drug")
TREATED_BY = iri(PPG + "treatedBy")
RECOMMENDED_MEDICATION = iri(PPG + "recommendedMedication")
HAS_SIDE_EFFECT = iri(PPG + "hasSideEffect")

# Derived events emitted by the CEP engine
DETECTED_EVENT = iri(PPG + "DetectedEvent")
HAS_LABEL = iri(PPG + "hasLabel")
HAS_TIMESTAMP = iri(PPG + "hasTimestamp")
TRIGGERED_BY = iri(PPG + "triggeredBy")
