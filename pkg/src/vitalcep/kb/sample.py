"""Bundled disease/drug knowledge base.

A curated, desk-scale stand-in for the clinical corpora the pipeline was
designed around: 81 disorders tied to vital-sign monitoring, each linked to
the drugs that treat it, and a side-effect table per drug. The Hypoxemia
entry carries its medication and side-effect lists verbatim so the
medication-lookup path has a fixed ground truth.
"""

import re
from dataclasses import dataclass
from importlib import resources

from ..rdf import Triple, TripleStore, literal, integer, iri, parse_turtle, serialize_turtle
from ..rdf.vocab import (
    DISEASE,
    DRUG,
    HAS_CONDITION,
    HAS_HEART_RATE,
    HAS_SIDE_EFFECT,
    PATIENT,
    PPG,
    RDF_TYPE,
    RDFS_LABEL,
    RECOMMENDED_MEDICATION,
    TAKES_MEDICATION,
    TREATED_BY,
)


@dataclass(frozen=True)
class KBEntry:
    disease: str
    treated_by: tuple[str, ...]
    recommended: tuple[str, ...]


def _entry(disease: str, *drugs: str) -> KBEntry:
    return KBEntry(disease, tuple(drugs), tuple(drugs))


SAMPLE_ENTRIES: tuple[KBEntry, ...] = (
    _entry("Hypoxemia", "Supplemental Oxygen", "Albuterol"),
    _entry("Tachycardia", "Metoprolol", "Amiodarone"),
    _entry("Bradycardia", "Atropine"),
    _entry("Hypertension", "Lisinopril", "Amlodipine"),
    _entry("Hypotension", "Fludrocortisone", "Midodrine"),
    _entry("Atrial Fibrillation", "Warfarin", "Diltiazem"),
    _entry("Atrial Flutter", "Sotalol"),
    _entry("Ventricular Tachycardia", "Amiodarone", "Lidocaine"),
    _entry("Heart Failure", "Furosemide", "Carvedilol"),
    _entry("Angina Pectoris", "Nitroglycerin", "Atenolol"),
    _entry("Myocardial Infarction", "Aspirin", "Clopidogrel"),
    _entry("Cardiomyopathy", "Carvedilol", "Enalapril"),
    _entry("Myocarditis", "Prednisone"),
    _entry("Pericarditis", "Colchicine", "Ibuprofen"),
    _entry("Endocarditis", "Vancomycin", "Gentamicin"),
    _entry("Arrhythmia", "Flecainide"),
    _entry("Heart Block", "Atropine", "Epinephrine"),
    _entry("Pulmonary Embolism", "Heparin", "Alteplase"),
    _entry("Pulmonary Hypertension", "Sildenafil", "Bosentan"),
    _entry("Asthma", "Albuterol", "Fluticasone"),
    _entry("Chronic Obstructive Pulmonary Disease", "Tiotropium", "Salmeterol"),
    _entry("Pneumonia", "Amoxicillin", "Azithromycin"),
    _entry("Bronchitis", "Dextromethorphan", "Amoxicillin"),
    _entry("Emphysema", "Tiotropium"),
    _entry("Pulmonary Edema", "Furosemide"),
    _entry("Pleural Effusion", "Furosemide"),
    _entry("Sleep Apnea", "Modafinil", "Acetazolamide"),
    _entry("Hyperventilation Syndrome", "Lorazepam"),
    _entry("Respiratory Acidosis", "Sodium Bicarbonate"),
    _entry("Respiratory Alkalosis", "Lorazepam"),
    _entry("Anemia", "Ferrous Sulfate", "Vitamin B12"),
    _entry("Polycythemia", "Hydroxyurea"),
    _entry("Sepsis", "Ceftriaxone", "Norepinephrine"),
    _entry("Septic Shock", "Norepinephrine", "Vancomycin"),
    _entry("Hypovolemia", "Normal Saline"),
    _entry("Dehydration", "Oral Rehydration Salts"),
    _entry("Hyperthermia", "Acetaminophen"),
    _entry("Hypothermia", "Normal Saline"),
    _entry("Fever", "Acetaminophen", "Ibuprofen"),
    _entry("Influenza", "Oseltamivir"),
    _entry("COVID-19", "Remdesivir", "Dexamethasone"),
    _entry("Tuberculosis", "Isoniazid", "Rifampin"),
    _entry("Diabetes Mellitus", "Metformin", "Insulin"),
    _entry("Hypoglycemia", "Glucagon", "Dextrose"),
    _entry("Hyperglycemia", "Insulin"),
    _entry("Thyrotoxicosis", "Methimazole", "Propranolol"),
    _entry("Hypothyroidism", "Levothyroxine"),
    _entry("Hyperthyroidism", "Methimazole"),
    _entry("Pheochromocytoma", "Phenoxybenzamine"),
    _entry("Anxiety Disorder", "Sertraline", "Lorazepam"),
    _entry("Panic Disorder", "Paroxetine", "Alprazolam"),
    _entry("Chronic Stress Syndrome", "Propranolol"),
    _entry("Obesity", "Orlistat"),
    _entry("Metabolic Syndrome", "Metformin", "Atorvastatin"),
    _entry("Hyperlipidemia", "Atorvastatin", "Simvastatin"),
    _entry("Atherosclerosis", "Atorvastatin", "Aspirin"),
    _entry("Coronary Artery Disease", "Aspirin", "Metoprolol"),
    _entry("Peripheral Artery Disease", "Cilostazol"),
    _entry("Deep Vein Thrombosis", "Heparin", "Rivaroxaban"),
    _entry("Stroke", "Alteplase", "Clopidogrel"),
    _entry("Transient Ischemic Attack", "Aspirin"),
    _entry("Carotid Stenosis", "Atorvastatin"),
    _entry("Aortic Stenosis", "Furosemide"),
    _entry("Mitral Regurgitation", "Enalapril"),
    _entry("Orthostatic Hypotension", "Midodrine", "Fludrocortisone"),
    _entry("Vasovagal Syncope", "Midodrine"),
    _entry("Long QT Syndrome", "Propranolol"),
    _entry("Wolff-Parkinson-White Syndrome", "Procainamide"),
    _entry("Sick Sinus Syndrome", "Theophylline"),
    _entry("Premature Ventricular Contractions", "Metoprolol"),
    _entry("Supraventricular Tachycardia", "Adenosine", "Verapamil"),
    _entry("Torsades de Pointes", "Magnesium Sulfate"),
    _entry("Cor Pulmonale", "Furosemide", "Sildenafil"),
    _entry("Acute Respiratory Distress Syndrome", "Dexamethasone"),
    _entry("Cystic Fibrosis", "Dornase Alfa", "Ivacaftor"),
    _entry("Pulmonary Fibrosis", "Pirfenidone", "Nintedanib"),
    _entry("Sarcoidosis", "Prednisone"),
    _entry("Obstructive Sleep Apnea", "Modafinil"),
    _entry("Central Sleep Apnea", "Acetazolamide"),
    _entry("Carbon Monoxide Poisoning", "Supplemental Oxygen"),
    _entry("Altitude Sickness", "Acetazolamide", "Dexamethasone"),
)

DRUG_SIDE_EFFECTS: dict[str, tuple[str, ...]] = {
    "Supplemental Oxygen": ("Dry Nose",),
    "Albuterol": ("Headache", "Tremors", "Increased Heart Rate"),
    "Metoprolol": ("Fatigue", "Dizziness", "Slow Heart Rate"),
    "Amiodarone": ("Thyroid Dysfunction", "Photosensitivity"),
    "Atropine": ("Dry Mouth", "Blurred Vision"),
    "Lisinopril": ("Dry Cough", "Dizziness"),
    "Amlodipine": ("Ankle Swelling", "Flushing"),
    "Fludrocortisone": ("Fluid Retention", "High Blood Pressure"),
    "Midodrine": ("Scalp Tingling", "Supine Hypertension"),
    "Warfarin": ("Bleeding", "Bruising"),
    "Diltiazem": ("Constipation", "Dizziness"),
    "Sotalol": ("Fatigue", "Slow Heart Rate"),
    "Lidocaine": ("Drowsiness", "Confusion"),
    "Furosemide": ("Dehydration", "Low Potassium"),
    "Carvedilol": ("Dizziness", "Weight Gain"),
    "Nitroglycerin": ("Headache", "Flushing"),
    "Atenolol": ("Cold Extremities", "Fatigue"),
    "Aspirin": ("Stomach Upset", "Bleeding"),
    "Clopidogrel": ("Bruising", "Bleeding"),
    "Enalapril": ("Dry Cough", "Elevated Potassium"),
    "Prednisone": ("Weight Gain", "Insomnia", "Mood Changes"),
    "Colchicine": ("Diarrhea", "Nausea"),
    "Ibuprofen": ("Stomach Upset", "Heartburn"),
    "Vancomycin": ("Kidney Injury", "Flushing"),
    "Gentamicin": ("Hearing Loss", "Kidney Injury"),
    "Flecainide": ("Dizziness", "Visual Disturbance"),
    "Epinephrine": ("Palpitations", "Anxiety"),
    "Heparin": ("Bleeding", "Low Platelets"),
    "Alteplase": ("Bleeding",),
    "Sildenafil": ("Headache", "Flushing"),
    "Bosentan": ("Liver Injury", "Anemia"),
    "Fluticasone": ("Oral Thrush", "Hoarseness"),
    "Tiotropium": ("Dry Mouth", "Constipation"),
    "Salmeterol": ("Tremors", "Palpitations"),
    "Amoxicillin": ("Rash", "Diarrhea"),
    "Azithromycin": ("Nausea", "QT Prolongation"),
    "Dextromethorphan": ("Drowsiness", "Dizziness"),
    "Modafinil": ("Insomnia", "Headache"),
    "Lorazepam": ("Drowsiness", "Dependence"),
    "Sodium Bicarbonate": ("Bloating", "Metabolic Alkalosis"),
    "Ferrous Sulfate": ("Constipation", "Dark Stools"),
    "Vitamin B12": ("Injection Site Pain",),
    "Hydroxyurea": ("Low Blood Counts", "Nausea"),
    "Ceftriaxone": ("Diarrhea", "Rash"),
    "Norepinephrine": ("Arrhythmia", "Limb Ischemia"),
    "Normal Saline": ("Fluid Overload",),
    "Oral Rehydration Salts": ("Nausea",),
    "Acetaminophen": ("Liver Injury",),
    "Oseltamivir": ("Nausea", "Vomiting"),
    "Remdesivir": ("Elevated Liver Enzymes",),
    "Dexamethasone": ("Elevated Blood Sugar", "Insomnia"),
    "Isoniazid": ("Peripheral Neuropathy", "Liver Injury"),
    "Rifampin": ("Orange Urine", "Liver Injury"),
    "Metformin": ("Diarrhea", "Metallic Taste"),
    "Insulin": ("Low Blood Sugar", "Weight Gain"),
    "Glucagon": ("Nausea", "Vomiting"),
    "Dextrose": ("Vein Irritation",),
    "Methimazole": ("Rash", "Low White Cells"),
    "Propranolol": ("Fatigue", "Cold Hands", "Vivid Dreams"),
    "Levothyroxine": ("Palpitations", "Weight Loss"),
    "Phenoxybenzamine": ("Nasal Congestion", "Dizziness"),
    "Sertraline": ("Nausea", "Insomnia"),
    "Paroxetine": ("Drowsiness", "Dry Mouth"),
    "Alprazolam": ("Drowsiness", "Dependence"),
    "Orlistat": ("Oily Stools", "Abdominal Cramps"),
    "Atorvastatin": ("Muscle Pain", "Elevated Liver Enzymes"),
    "Simvastatin": ("Muscle Pain", "Constipation"),
    "Cilostazol": ("Headache", "Diarrhea"),
    "Rivaroxaban": ("Bleeding",),
    "Adenosine": ("Chest Pressure", "Flushing"),
    "Verapamil": ("Constipation", "Dizziness"),
    "Procainamide": ("Drug-induced Lupus", "Nausea"),
    "Theophylline": ("Tremors", "Insomnia", "Nausea"),
    "Magnesium Sulfate": ("Flushing", "Muscle Weakness"),
    "Dornase Alfa": ("Voice Alteration", "Sore Throat"),
    "Ivacaftor": ("Headache", "Rash"),
    "Pirfenidone": ("Photosensitivity", "Nausea"),
    "Nintedanib": ("Diarrhea", "Liver Injury"),
    "Acetazolamide": ("Tingling", "Frequent Urination"),
}

# Demo patient graph exercised by the heart-rate/side-effect join query.
SAMPLE_PATIENTS: tuple[tuple[str, int, str | None, tuple[str, ...]], ...] = (
    ("Patient_1", 132, "Tachycardia", ("Metoprolol",)),
    ("Patient_2", 126, "Tachycardia", ("Amiodarone", "Metoprolol")),
    ("Patient_3", 118, "Tachycardia", ("Metoprolol",)),
    ("Patient_4", 95, None, ("Aspirin",)),
    ("Patient_5", 141, "Tachycardia", ("Sotalol",)),
    ("Patient_6", 88, "Hypoxemia", ("Supplemental Oxygen",)),
    ("Patient_7", 124, "Atrial Fibrillation", ("Warfarin",)),
    ("Patient_8", 67, None, ()),
)


def slug(label: str) -> str:
    """IRI-safe local name for a human-readable label."""
    return re.sub(r"[^A-Za-z0-9]+", "", label.title())


def disease_iri(label: str):
    return iri(f"{PPG}Disease_{slug(label)}")


def drug_iri(label: str):
    return iri(f"{PPG}Drug_{slug(label)}")


def build_sample_store() -> TripleStore:
    """Assemble the bundled KB from the curated tables."""
    store = TripleStore()
    used_drugs: dict[str, None] = {}
    for entry in SAMPLE_ENTRIES:
        d = disease_iri(entry.disease)
        store.insert(Triple(d, RDF_TYPE, DISEASE))
        store.insert(Triple(d, RDFS_LABEL, literal(entry.disease)))
        for drug in entry.treated_by:
            used_drugs.setdefault(drug)
            store.insert(Triple(d, TREATED_BY, drug_iri(drug)))
        for drug in entry.recommended:
            used_drugs.setdefault(drug)
            store.insert(Triple(d, RECOMMENDED_MEDICATION, drug_iri(drug)))
    for drug in used_drugs:
        g = drug_iri(drug)
        store.insert(Triple(g, RDF_TYPE, DRUG))
        store.insert(Triple(g, RDFS_LABEL, literal(drug)))
        for effect in DRUG_SIDE_EFFECTS[drug]:
            store.insert(Triple(g, HAS_SIDE_EFFECT, literal(effect)))
    for name, hr, condition, medications in SAMPLE_PATIENTS:
        p = iri(PPG + name)
        store.insert(Triple(p, RDF_TYPE, PATIENT))
        store.insert(Triple(p, HAS_HEART_RATE, integer(hr)))
        if condition:
            store.insert(Triple(p, HAS_CONDITION, literal(condition)))
        for drug in medications:
            store.insert(Triple(p, TAKES_MEDICATION, drug_iri(drug)))
    return store


def load_sample_kb() -> TripleStore:
    """Parse the packaged Turtle file (same content as build_sample_store)."""
    text = resources.files("vitalcep.kb").joinpath("data/sample_kb.ttl").read_text("utf-8")
    return TripleStore(parse_turtle(text))


def sample_kb_turtle() -> str:
    return serialize_turtle(build_sample_store())


def hypoxemia_ground_truth() -> tuple[list[str], list[str]]:
    """Curated medication and side-effect label lists for the Hypoxemia row."""
    entry = next(e for e in SAMPLE_ENTRIES if e.disease == "Hypoxemia")
    medications = list(entry.recommended)
    side_effects: list[str] = []
    for drug in entry.recommended:
        for effect in DRUG_SIDE_EFFECTS[drug]:
            if effect not in side_effects:
                side_effects.append(effect)
    return medications, side_effects


def hypoxemia_row(store: TripleStore, chunks: int = 1, parallelism: int = 1) -> tuple[str, str]:
    """Run the hypoxemia medication query and format one aggregated row.

    Returns comma-joined medication and side-effect label strings. The query
    binds medication IRIs; labels come from the store, ordered by the curated
    entry so the row reads the way the clinical table presents it.
    """
    from ..query import execute, parse_query
    from ..rdf import partition
    from .queries import HYPOXEMIA_QUERY

    result = execute(partition(store, chunks), parse_query(HYPOXEMIA_QUERY), parallelism)
    by_medication: dict[str, list[str]] = {}
    for med_term, effect_term in result.rows:
        labels = store.match(s=med_term, p=RDFS_LABEL)
        label = labels[0].o.value if labels else med_term.value
        by_medication.setdefault(label, []).append(effect_term.value)

    medications, side_effects = hypoxemia_ground_truth()
    med_order = [m for m in medications if m in by_medication] + [
        m for m in sorted(by_medication) if m not in medications
    ]
    effect_order: list[str] = []
    for med in med_order:
        curated = [e for e in side_effects if e in by_medication[med]]
        extras = sorted(e for e in by_medication[med] if e not in side_effects)
        for effect in curated + extras:
            if effect not in effect_order:
                effect_order.append(effect)
    return ", ".join(med_order), ", ".join(effect_order)
