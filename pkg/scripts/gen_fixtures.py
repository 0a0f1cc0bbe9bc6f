"""Regenerate the bundled synthetic EMR export under src/note_forge/fixtures/emr/.

The corpus is fully synthetic but keeps the shape of a real MIMIC-III v1.4
export: shifted 21xx dates, de-identification placeholders in note text,
quoted multi-line TEXT fields, and a handful of deliberately malformed rows
that must land in the rejects report. Twenty patients; four admissions
survive the cohort rules (901, 902, 907, 908) and four are excluded, one per
rule (903 age, 904 length of stay, 905 no discharge summary, 906 overlong
discharge summary).

Run from the repo root: python scripts/gen_fixtures.py
"""

import csv
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "note_forge" / "fixtures" / "emr"


def write(name, header, rows):
    OUT.mkdir(parents=True, exist_ok=True)
    with (OUT / name).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([str(v) for v in row])


# --- PATIENTS: exactly 20 rows --------------------------------------------

patients = [
    # row, subject, gender, dob, dod, dod_hosp, dod_ssn, expire
    (1, 901, "M", "2040-03-16 00:00:00", "", "", "", 0),
    (2, 902, "F", "2076-08-02 00:00:00", "", "", "", 0),
    (3, 903, "M", "2103-04-10 00:00:00", "", "", "", 0),
    (4, 904, "F", "2058-11-23 00:00:00", "", "", "", 0),
    (5, 905, "M", "2066-02-14 00:00:00", "", "", "", 0),
    (6, 906, "F", "2049-07-30 00:00:00", "", "", "", 0),
    # dob shifted ~300 years back; triggers the age-clamp path downstream
    (7, 907, "M", "1821-06-05 00:00:00", "", "", "", 0),
    (8, 908, "F", "2072-01-19 00:00:00", "", "", "", 0),
    (9, 909, "M", "2051-09-12 00:00:00", "2122-01-03 00:00:00", "", "2122-01-03 00:00:00", 1),
    (10, 910, "F", "2063-05-27 00:00:00", "", "", "", 0),
    (11, 911, "M", "2088-12-01 00:00:00", "", "", "", 0),
    (12, 912, "F", "2045-02-09 00:00:00", "2121-11-20 00:00:00", "2121-11-20 00:00:00", "", 1),
    (13, 913, "M", "2079-06-18 00:00:00", "", "", "", 0),
    (14, 914, "F", "2095-10-05 00:00:00", "", "", "", 0),
    (15, 915, "M", "2057-03-30 00:00:00", "", "", "", 0),
    (16, 916, "F", "2068-07-11 00:00:00", "", "", "", 0),
    (17, 917, "M", "2042-08-24 00:00:00", "2120-12-30 00:00:00", "", "", 1),
    (18, 918, "F", "2084-01-02 00:00:00", "", "", "", 0),
    (19, 919, "M", "2071-04-15 00:00:00", "", "", "", 0),
    (20, 920, "F", "2060-09-28 00:00:00", "", "", "", 0),
]
write("PATIENTS.csv",
      ["ROW_ID", "SUBJECT_ID", "GENDER", "DOB", "DOD", "DOD_HOSP", "DOD_SSN", "EXPIRE_FLAG"],
      patients)

# --- ADMISSIONS ------------------------------------------------------------

admissions = [
    (1, 901, 1001, "2121-05-29 05:10:00", "2121-05-31 16:00:00", "EMERGENCY", "UPPER GI BLEED"),
    (2, 902, 1002, "2121-07-04 11:20:00", "2121-07-08 09:30:00", "EMERGENCY", "PNEUMONIA"),
    (3, 903, 1003, "2121-06-20 08:00:00", "2121-06-22 10:00:00", "EMERGENCY", "APPENDICITIS"),
    (4, 904, 1004, "2121-02-10 09:00:00", "2121-02-18 09:00:00", "ELECTIVE", "HIP REPLACEMENT"),
    (5, 905, 1005, "2121-09-01 14:00:00", "2121-09-04 12:00:00", "EMERGENCY", "CHEST PAIN"),
    (6, 906, 1006, "2121-03-05 10:00:00", "2121-03-09 15:00:00", "EMERGENCY", "SEPSIS"),
    (7, 907, 1007, "2121-10-11 06:30:00", "2121-10-14 18:45:00", "EMERGENCY", "GI BLEED"),
    (8, 908, 1008, "2121-11-02 13:05:00", "2121-11-05 08:20:00", "EMERGENCY", "ACUTE PANCREATITIS"),
]
write("ADMISSIONS.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "ADMITTIME", "DISCHTIME", "DEATHTIME",
       "ADMISSION_TYPE", "INSURANCE", "DIAGNOSIS"],
      [(r, s, h, a, d, "", t, "Medicare", dx) for r, s, h, a, d, t, dx in admissions])

# --- coded events ----------------------------------------------------------

diagnoses = [
    (1, 901, 1001, 1, "42731"),
    (2, 901, 1001, 2, "5307"),
    (3, 901, 1001, 3, "45340"),
    (4, 901, 1001, 4, "4280"),
    (5, 901, 1001, 5, "V551"),
    (6, 901, 1001, 6, "2859"),   # beyond the per-admission code cap
    (7, 902, 1002, 1, "486"),
    (8, 902, 1002, 2, "4019"),
    (9, 903, 1003, 1, "5409"),
    (10, 904, 1004, 1, "71535"),
    (11, 905, 1005, 1, "78650"),
    (12, 906, 1006, 1, "0389"),
    (13, 906, 1006, 2, "5849"),
    (14, 907, 1007, 1, "5789"),
    (15, 907, 1007, 2, "2851"),
    (16, 907, 1007, 3, "5849"),
    (17, 908, 1008, 1, "5770"),
]
write("DIAGNOSES_ICD.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "SEQ_NUM", "ICD9_CODE"], diagnoses)

procedures = [
    (1, 901, 1001, 1, "4516"),
    (2, 901, 1001, 2, "431"),
    (3, 904, 1004, 1, "8151"),
    (4, 907, 1007, 1, "9904"),
    (5, 903, 1003, 0, "470"),    # SEQ_NUM below 1: must be rejected
]
write("PROCEDURES_ICD.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "SEQ_NUM", "ICD9_CODE"], procedures)

# --- prescriptions ---------------------------------------------------------

rx = [
    # row, subject, hadm, start, end, drug, dose_val, dose_unit, route
    (5001, 901, 1001, "2121-05-29", "2121-05-30", "Heparin Sodium", "5000", "UNIT", "IV"),
    (5002, 901, 1001, "2121-05-29", "2121-05-29", "Heparin Sodium", "5000", "UNIT", "IV"),
    (5003, 901, 1001, "2121-05-30", "2121-05-31", "Levofloxacin", "750", "mg", "IV"),
    (5004, 901, 1001, "2121-05-29", "2121-05-30", "Metoprolol Tartrate", "5", "mg", "IV"),
    (5005, 901, 1001, "2121-05-30", "2121-05-31", "Metoprolol Tartrate", "25", "mg", "PO"),
    (5006, 901, 1001, "2121-05-29", "2121-05-29", "Fentanyl Citrate", "50", "mcg", "IV"),
    (5007, 901, 1001, "2121-05-29", "2121-05-29", "Propofol", "20", "mcg/kg/min", "IV"),
    (5008, 901, 1001, "2121-05-30", "2121-05-30", "Magnesium Sulfate", "2", "gm", "IV"),
    (5009, 901, 1001, "2121-05-31", "2121-05-31", "Warfarin", "5", "mg", "PO"),
    (5010, 901, 1001, "2121-05-30", "2121-05-30", "Lorazepam", "0.5", "mg", "IV"),
    (5011, 901, 1001, "2121-05-30", "2121-05-30", "Haloperidol", "2.5", "mg", "IV"),
    # recorded after discharge: dropped as out-of-window, never rejected
    (5012, 901, 1001, "2121-06-15", "2121-06-15", "Aspirin EC", "81", "mg", "PO"),
    (5013, 902, 1002, "2121-07-04", "2121-07-07", "Ceftriaxone", "1", "gm", "IV"),
    (5014, 902, 1002, "2121-07-04", "2121-07-06", "Azithromycin", "500", "mg", "PO"),
    (5015, 902, 1002, "2121-07-05", "2121-07-07", "Acetaminophen", "650", "mg", "PO"),
    (5016, 902, 1002, "2121-07-04", "2121-07-07", "Heparin Sodium", "5000", "UNIT", "SC"),
    (5017, 907, 1007, "2121-10-12", "2121-10-14", "Heparin Sodium", "5000", "UNIT", "SC"),
    (5018, 907, 1007, "2121-10-11", "2121-10-14", "Pantoprazole", "40", "mg", "IV"),
    (5019, 907, 1007, "2121-10-12", "2121-10-14", "Metoprolol Tartrate", "25", "mg", "PO"),
    (5020, 908, 1008, "2121-11-02", "2121-11-04", "Acetaminophen", "650", "mg", "PO"),
    (5021, 908, 1008, "2121-11-02", "2121-11-03", "Morphine Sulfate", "2", "mg", "IV"),
    (5022, 908, 1008, "2121-11-03", "2121-11-05", "Heparin Sodium", "5000", "UNIT", "SC"),
]
write("PRESCRIPTIONS.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "ICUSTAY_ID", "STARTDATE", "ENDDATE",
       "DRUG_TYPE", "DRUG", "DOSE_VAL_RX", "DOSE_UNIT_RX", "ROUTE"],
      [(r, s, h, "", a + " 00:00:00", b + " 00:00:00", "MAIN", d, dv, du, rt)
       for r, s, h, a, b, d, dv, du, rt in rx])

# --- chart events ----------------------------------------------------------
# Item coverage across the 4 cohort patients drives the chart vocabulary:
# 211 on 4/4; 791/813/814/815/828 on 3/4; 676 on exactly 2/4 (the strict
# threshold boundary); 618 and 1286 on 1/4.

chart = [
    (7001, 901, 1001, 211, "2121-05-29 06:00:00", 88, "BPM"),
    (7002, 901, 1001, 211, "2121-05-30 23:30:00", 132, "BPM"),
    (7003, 901, 1001, 813, "2121-05-29 06:30:00", 30.5, "%"),
    (7004, 901, 1001, 813, "2121-05-30 04:00:00", 27.8, "%"),
    (7005, 901, 1001, 813, "2121-05-31 05:00:00", 29.1, "%"),
    (7006, 901, 1001, 814, "2121-05-29 06:30:00", 10.1, "g/dl"),
    (7007, 901, 1001, 814, "2121-05-30 04:00:00", 9.4, "g/dl"),
    (7008, 901, 1001, 828, "2121-05-29 06:30:00", 215, "K/uL"),
    (7009, 901, 1001, 828, "2121-05-30 04:00:00", 183, "K/uL"),
    (7010, 901, 1001, 791, "2121-05-29 06:30:00", 0.7, "mg/dL"),
    (7011, 901, 1001, 791, "2121-05-31 05:00:00", 0.8, "mg/dL"),
    (7012, 901, 1001, 815, "2121-05-29 06:30:00", 1.4, ""),
    (7013, 901, 1001, 815, "2121-05-31 05:00:00", 1.2, ""),
    (7014, 901, 1001, 1286, "2121-05-29 06:30:00", 14.8, "sec"),
    # charted after discharge: dropped as out-of-window
    (7015, 901, 1001, 211, "2121-06-02 10:00:00", 76, "BPM"),
    (7016, 902, 1002, 211, "2121-07-04 12:00:00", 104, "BPM"),
    (7017, 902, 1002, 211, "2121-07-06 08:00:00", 92, "BPM"),
    (7018, 902, 1002, 676, "2121-07-04 12:00:00", 38.6, "Deg. C"),
    (7019, 902, 1002, 676, "2121-07-06 08:00:00", 37.1, "Deg. C"),
    (7020, 902, 1002, 618, "2121-07-04 12:00:00", 24, "insp/min"),
    (7021, 907, 1007, 211, "2121-10-11 07:00:00", 96, "BPM"),
    (7022, 907, 1007, 813, "2121-10-11 07:30:00", 24.2, "%"),
    (7023, 907, 1007, 813, "2121-10-13 05:00:00", 28.9, "%"),
    (7024, 907, 1007, 814, "2121-10-11 07:30:00", 8.1, "g/dl"),
    (7025, 907, 1007, 828, "2121-10-11 07:30:00", 301, "K/uL"),
    (7026, 907, 1007, 791, "2121-10-11 07:30:00", 1.9, "mg/dL"),
    (7027, 907, 1007, 791, "2121-10-13 05:00:00", 1.4, "mg/dL"),
    (7028, 907, 1007, 815, "2121-10-11 07:30:00", 1.1, ""),
    (7029, 908, 1008, 211, "2121-11-02 14:00:00", 110, "BPM"),
    (7030, 908, 1008, 676, "2121-11-02 14:00:00", 38.2, "Deg. C"),
    (7031, 908, 1008, 813, "2121-11-03 06:00:00", 39.0, "%"),
    (7032, 908, 1008, 814, "2121-11-03 06:00:00", 13.1, "g/dl"),
    (7033, 908, 1008, 828, "2121-11-03 06:00:00", 255, "K/uL"),
    (7034, 908, 1008, 791, "2121-11-03 06:00:00", 1.0, "mg/dL"),
    (7035, 908, 1008, 815, "2121-11-03 06:00:00", 1.0, ""),
]
chart_rows = [(r, s, h, "", i, t, "", "", v, v, u, 0, 0) for r, s, h, i, t, v, u in chart]
# non-numeric VALUENUM: must land in the rejects report
chart_rows.append((7036, 901, 1001, "", 211, "2121-05-30 12:00:00", "", "", "err", "err", "BPM", 0, 0))
write("CHARTEVENTS.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "ICUSTAY_ID", "ITEMID", "CHARTTIME",
       "STORETIME", "CGID", "VALUE", "VALUENUM", "VALUEUOM", "WARNING", "ERROR"],
      chart_rows)

# --- lab events (parsed for completeness, excluded downstream) -------------

labs = [
    (8001, 901, 1001, 50912, "2121-05-29 06:35:00", 0.7, "mg/dL"),
    (8002, 901, 1001, 51265, "2121-05-29 06:35:00", 215, "K/uL"),
    (8003, 901, "", 50912, "2121-04-02 09:00:00", 0.6, "mg/dL"),  # outpatient draw, no hadm
    (8004, 902, 1002, 51265, "2121-07-04 12:30:00", 340, "K/uL"),
]
write("LABEVENTS.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "ITEMID", "CHARTTIME", "VALUE", "VALUENUM", "VALUEUOM"],
      [(r, s, h, i, t, v, v, u) for r, s, h, i, t, v, u in labs])

# --- notes -----------------------------------------------------------------

N = {}

N[9001] = (901, 1001, "2121-05-29", "2121-05-29 05:45:00", "ECG", "Report", """\
Atrial fibrillation with rapid ventricular response.
Non-specific inferolateral ST-T wave changes.
Compared to the previous tracing the rate has increased.
""")

N[9002] = (901, 1001, "2121-05-29", "2121-05-29 09:00:00", "Physician ", "Admission Note", """\
Chief Complaint: coffee ground emesis

HPI: Mr. [**Known lastname 1001**] is an 81M with atrial fibrillation on
warfarin, systolic CHF, and a remote lower extremity DVT who presents with
two days of coffee ground emesis and lightheadedness. No melena, no
hematochezia. Last INR at [**Hospital1 52**] clinic was therapeutic.

PMH: atrial fibrillation, CHF, DVT [**2116**], GERD

Meds on admission: warfarin 5 mg daily, metoprolol 25 mg bid

Exam: afebrile, HR 112 irregular, BP 104/62. Abd soft, mildly tender
epigastrium. Rectal: guaiac positive brown stool (per ED).

A/P: 81M with likely upper GI bleed on anticoagulation.
- hold warfarin, type and cross 2 units
- pantoprazole infusion, NPO, GI consulted for urgent EGD
- serial hematocrits q6h
- rate control with IV metoprolol, avoid hypotension
""")

N[9003] = (901, 1001, "2121-05-29", "2121-05-29 11:30:00", "Radiology", "CHEST (PORTABLE AP)", """\
[**2121-5-29**] 11:30 AM
 CHEST (PORTABLE AP)                                   Clip # [**Clip Number (Radiology) 71205**]
 Reason: interval change, NG tube placement
 ______________________________________________________________________________
 [**Hospital 4**] MEDICAL CONDITION:
  81 year old man with upper GI bleed, s/p NG tube placement
 ______________________________________________________________________________
                                 FINAL REPORT
 HISTORY: Upper GI bleed, NG tube placement.

 FINDINGS: Single portable upright view. Low lung volumes. The
 cardiomediastinal silhouette is enlarged but stable. No focal
 consolidation, effusion, or pneumothorax.

 IMPRESSION: No acute cardiopulmonary process.
                                 FINAL REPORT
 ADDENDUM: The nasogastric tube tip projects below the left
 hemidiaphragm, in satisfactory position.
""")

N[9004] = (901, 1001, "2121-05-29", "2121-05-29 19:30:00", "Nursing/other", "Report", """\
NPN 0700-1900
****
Neuro: alert, oriented x3, c/o mild epigastric discomfort.

CV: afib rate 90s-110s on IV lopressor. BP stable. Palpable pulses.

GI: EGD done at bedside this afternoon -- [**Doctor Last Name 610**] found a
Mallory-Weiss tear at the GE junction, no active bleeding, no intervention
needed. NPO cont. Pantoprazole gtt. 1 unit PRBC given for hct 27.8, repeat
pending. NG tube to low wall suction, scant coffee ground material clearing.

Plan: serial hcts, cont PPI gtt, NPO overnight, monitor rhythm.
""")

N[9005] = (901, 1001, "2121-05-30", "2121-05-30 14:00:00", "Echo", "Report", """\
PATIENT/TEST INFORMATION:
Indication: atrial fibrillation, CHF, evaluate LV function
Height: (in) 68
Weight (lb): 152
Status: Inpatient

Findings:
LEFT ATRIUM: Moderately dilated LA.
LEFT VENTRICLE: Mild symmetric LVH. Moderately depressed LVEF.
MITRAL VALVE: Mildly thickened leaflets. Mild (1+) MR.

Conclusions:
The left atrium is moderately dilated. There is mild symmetric left
ventricular hypertrophy with moderately depressed global systolic function
(LVEF 35-40%). Mild mitral regurgitation. Compared with the prior study the
ejection fraction is slightly lower.
""")

N[9006] = (901, 1001, "2121-05-30", "2121-05-30 20:00:00", "Nursing/other", "Report", """\
NPN 0700-1900
PEG placed at the bedside by GI this afternoon, procedure tolerated without
complication. Site clean, dry, intact. To remain NPO overnight; tube feeds
to start in AM per GI. Heparin gtt to be restarted this evening now that
hct stable x2. Pt weaned from O2, on room air with sats >95%.
Plan: restart heparin gtt, start TF in AM, PT consult for mobility.
""")

N[9007] = (901, 1001, "2121-05-31", "2121-05-31 09:00:00", "Nursing/other", "Report", """\
NPN 1900-0700
CV: brief episode of rapid afib to 130s overnight ~2330, treated with IV
diltiazem bolus with good effect, rate now 80s-90s. Heparin gtt infusing,
PTT therapeutic. Warfarin to restart today per team.
Neuro: episode of agitation overnight, pulling at lines -- haldol 2.5 mg IV
x1 with effect. Calm and redirectable this AM.
GI: tube feeds started via PEG at 20 ml/hr, advanced without residuals.
Dispo: PT saw pt, recommends rehab. Screening initiated.
""")

N[9008] = (901, 1001, "2121-05-31", "2121-05-31 15:30:00", "Discharge summary", "Report", """\
Admission Date:  [**2121-5-29**]              Discharge Date:   [**2121-5-31**]

Date of Birth:  [**2040-3-16**]             Sex:   M

Service: MEDICINE

HISTORY OF PRESENT ILLNESS:
Mr. [**Known lastname 1001**] is an 81 year old man with atrial
fibrillation on warfarin, congestive heart failure, and a prior deep
venous thrombosis who presented with two days of coffee ground emesis
and lightheadedness. In the emergency department his hematocrit was
30.5, down from a baseline in the mid 30s. Warfarin was held and he was
admitted to the medical intensive care unit.

HOSPITAL COURSE:
1. Gastrointestinal bleeding. Urgent endoscopy on hospital day one
showed a Mallory-Weiss tear at the gastroesophageal junction with no
active bleeding. He received one unit of packed red blood cells and was
started on a pantoprazole infusion. Serial hematocrits were stable
thereafter.
----
2. Atrial fibrillation. Rate control was initially given intravenously.
Overnight on [**2121-5-30**] he had a rapid ventricular response to the
130s, treated with intravenous diltiazem and resumption of metoprolol.
Anticoagulation was bridged with a heparin infusion once hemostasis was
confirmed, and warfarin was restarted on the day of discharge.
----
3. Nutrition. Because of poor oral intake and aspiration risk, a
percutaneous endoscopic gastrostomy tube was placed at the bedside on
[**2121-5-30**]. Tube feeds were advanced to goal without residuals.



DISCHARGE MEDICATIONS:
Warfarin 5 mg daily, metoprolol tartrate 25 mg twice daily,
levofloxacin 750 mg daily for three additional days, pantoprazole 40 mg
daily.

DISCHARGE CONDITION: Stable, tolerating tube feeds, rate controlled.

DISCHARGE DISPOSITION: To [**Hospital 21**] rehabilitation facility for
physical therapy and INR monitoring.

                              [**First Name8 (NamePattern2) 304**]
                              [**Last Name (NamePattern1) 2382**], M.D.
""")

N[9009] = (901, 1001, "2121-05-31", "2121-05-31 17:00:00", "Discharge summary", "Addendum", """\
ADDENDUM: INR on the morning of discharge was 1.3. The rehabilitation
facility was asked to continue the heparin bridge until the INR is
therapeutic on two consecutive daily checks.
""")

N[9010] = (902, 1002, "2121-07-04", "2121-07-04 13:00:00", "Radiology", "CHEST (PA & LAT)", """\
[**2121-7-4**] 1:00 PM
 CHEST (PA & LAT)                                      Clip # [**Clip Number (Radiology) 80311**]
 Reason: fever, cough, evaluate for pneumonia
 ______________________________________________________________________________
                                 FINAL REPORT
 HISTORY: 44 year old woman with fever and productive cough.

 FINDINGS: PA and lateral views. There is a focal consolidation in the
 right lower lobe. No effusion or pneumothorax. Heart size is normal.

 IMPRESSION: Right lower lobe consolidation consistent with pneumonia.
""")

N[9011] = (902, 1002, "2121-07-05", "2121-07-05 08:00:00", "Nursing", "Nursing Progress Note", """\
Pt is a 44F admitted with right lower lobe pneumonia.
Febrile overnight to 38.6, cultures drawn, tylenol given with effect.
O2 weaned from 3L to room air this morning, sats 94-96%.
Productive cough, encouraged incentive spirometry.
IV ceftriaxone and PO azithromycin continue. Tolerating regular diet.
""")

N[9012] = (902, 1002, "2121-07-08", "2121-07-08 08:45:00", "Discharge summary", "Report", """\
Admission Date: [**2121-7-4**]    Discharge Date: [**2121-7-8**]
Date of Birth: [**2076-8-2**]     Sex: F
Service: MEDICINE

HISTORY OF PRESENT ILLNESS:
Ms. [**Known lastname 1002**] is a 44 year old woman with no significant
past medical history who presented with three days of fever, productive
cough, and pleuritic right-sided chest pain. Chest radiograph showed a
right lower lobe consolidation.

HOSPITAL COURSE:
She was treated for community acquired pneumonia with intravenous
ceftriaxone and oral azithromycin. Blood cultures remained negative.
Fevers resolved by hospital day three and she was weaned to room air.
She was transitioned to oral cefpodoxime to complete a seven day course.

DISCHARGE MEDICATIONS:
Cefpodoxime 200 mg twice daily for three days, azithromycin 250 mg
daily for two days, acetaminophen as needed.

DISCHARGE CONDITION: Afebrile, ambulating, oxygen saturation 96% on
room air.

DISCHARGE DISPOSITION: Home with primary care follow up in one week.
""")

N[9013] = (903, 1003, "2121-06-22", "2121-06-22 09:00:00", "Discharge summary", "Report", """\
Admission Date: [**2121-6-20**]  Discharge Date: [**2121-6-22**]
Sex: M

Brief course: 18 year old man admitted with acute appendicitis, taken to
the operating room for laparoscopic appendectomy on the day of admission.
Post-operative course uncomplicated. Discharged home on oral antibiotics
with surgical follow up in two weeks.
""")

N[9014] = (904, 1004, "2121-02-18", "2121-02-18 08:00:00", "Discharge summary", "Report", """\
Admission Date: [**2121-2-10**]  Discharge Date: [**2121-2-18**]
Sex: F

Brief course: 62 year old woman admitted for elective right total hip
replacement for severe osteoarthritis. The post-operative course was
complicated by poorly controlled pain and slow mobilization, extending
the stay. She was discharged to rehabilitation on post-operative day
eight on oral analgesia and DVT prophylaxis.
""")

N[9015] = (905, 1005, "2121-09-02", "2121-09-02 10:00:00", "Nursing/other", "Report", """\
NPN: 55M admitted with chest pain, ruled out for myocardial infarction by
serial enzymes. Monitored on telemetry without events. Plan for stress
testing prior to discharge.
""")

# Overlong discharge summary for admission 1006: built from repeated daily
# entries so the cleaned word count comfortably exceeds the 500-word limit.
_day_lines = []
for day in range(1, 16):
    _day_lines.append(
        f"Hospital day {day}: The patient remained on broad spectrum "
        f"antibiotics with vancomycin and piperacillin-tazobactam. Vital "
        f"signs were monitored closely and blood cultures were followed. "
        f"Intravenous fluids were titrated to urine output and lactate "
        f"trended toward normal. Physical therapy worked with the patient "
        f"at the bedside and nutrition was maintained with a regular diet."
    )
N[9016] = (906, 1006, "2121-03-09", "2121-03-09 14:00:00", "Discharge summary", "Report",
           "Admission Date: [**2121-3-5**]  Discharge Date: [**2121-3-9**]\n"
           "Sex: F\n\nHISTORY OF PRESENT ILLNESS:\n"
           "Ms. [**Known lastname 1006**] is a 71 year old woman admitted with "
           "fever, hypotension, and presumed urinary source sepsis.\n\n"
           "HOSPITAL COURSE:\n" + "\n".join(_day_lines) + "\n\n"
           "DISCHARGE DISPOSITION: Home with services.\n")

N[9017] = (907, 1007, "2121-10-11", "2121-10-11 09:15:00", "Radiology", "CT ABDOMEN W/O CONTRAST", """\
[**2121-10-11**] 9:15 AM
 CT ABDOMEN W/O CONTRAST                               Clip # [**Clip Number (Radiology) 91477**]
 Reason: GI bleed, evaluate for source
 HISTORY: Elderly man with gastrointestinal bleeding and acute anemia.

 FINDINGS: No retroperitoneal hematoma. Diverticulosis of the sigmoid
 colon without surrounding inflammation. No free air or free fluid.

 IMPRESSION: Sigmoid diverticulosis. No acute process identified.
""")

N[9018] = (907, 1007, "2121-10-12", "2121-10-12 06:00:00", "Nursing/other", "Report", """\
NPN 1900-0700
GI: melena x2 overnight, smaller volume. 2 units PRBC transfused for hct
24.2 with appropriate bump. Hemodynamically stable throughout, no
tachycardia. Pantoprazole gtt continues.
Colonoscopy planned for today after prep.
""")

N[9019] = (907, 1007, "2121-10-11", "2121-10-11 06:50:00", "ECG", "Report", """\
Sinus tachycardia. Low limb lead voltage. No acute ischemic changes.
""")

N[9020] = (907, 1007, "2121-10-14", "2121-10-14 17:30:00", "Discharge summary", "Report", """\
Admission Date: [**2121-10-11**]  Discharge Date: [**2121-10-14**]
Sex: M

HISTORY OF PRESENT ILLNESS:
An elderly gentleman presented with melena and symptomatic anemia with a
hematocrit of 24.2 on arrival.

HOSPITAL COURSE:
He was transfused two units of packed red blood cells with an
appropriate response. Colonoscopy showed sigmoid diverticulosis with
stigmata of recent bleeding but no active hemorrhage; no intervention
was required. His creatinine improved with volume resuscitation from
1.9 to 1.4. Diet was advanced and hematocrit remained stable for the
final two hospital days.

DISCHARGE MEDICATIONS: Pantoprazole 40 mg daily, metoprolol tartrate
25 mg twice daily, subcutaneous heparin while at rehabilitation.

DISCHARGE DISPOSITION: To rehabilitation with weekly blood counts.
""")

N[9021] = (908, 1008, "2121-11-03", "2121-11-03 07:30:00", "Nursing/other", "Report", """\
NPN: 49F with acute pancreatitis, lipase elevated on admission. Pain
controlled overnight on IV morphine, transitioned to PO tylenol this AM.
NPO advanced to clears, tolerating without nausea. IVF continue at 150/hr.
""")

N[9022] = (908, 1008, "2121-11-05", "2121-11-05 07:40:00", "Discharge summary", "Report", """\
Admission Date: [**2121-11-2**]  Discharge Date: [**2121-11-5**]
Sex: F

HISTORY OF PRESENT ILLNESS:
Ms. [**Known lastname 1008**] is a 49 year old woman who presented with
epigastric pain radiating to the back and a lipase greater than three
times the upper limit of normal, consistent with acute pancreatitis.
Right upper quadrant ultrasound showed no gallstones.

HOSPITAL COURSE:
She was managed with aggressive intravenous hydration, anti-emetics,
and analgesia. Her diet was advanced as tolerated from clear liquids to
a low fat diet by hospital day three. Pain resolved off opioids.

DISCHARGE MEDICATIONS: Acetaminophen as needed.

DISCHARGE DISPOSITION: Home, with outpatient gastroenterology follow up
and counseling on alcohol avoidance.
""")

note_rows = []
for row_id in sorted(N):
    subj, hadm, cdate, ctime, category, description, text = N[row_id]
    note_rows.append((row_id, subj, hadm, cdate, ctime, "", category, description, "", "", text))
# unknown category: must be rejected
note_rows.append((9023, 901, 1001, "2121-05-30", "2121-05-30 10:00:00", "", "Telemetry",
                  "Report", "", "", "Telemetry strip reviewed, afib rate 90s."))
# note without an admission id: parsed, but never attached to a timeline
note_rows.append((9024, 901, "", "2121-05-20", "", "", "Nursing/other", "Report", "", "",
                  "Outpatient triage call regarding warfarin dosing, advised clinic visit."))
write("NOTEEVENTS.csv",
      ["ROW_ID", "SUBJECT_ID", "HADM_ID", "CHARTDATE", "CHARTTIME", "STORETIME",
       "CATEGORY", "DESCRIPTION", "CGID", "ISERROR", "TEXT"],
      note_rows)

# --- dictionaries ----------------------------------------------------------

d_icd_dx = [
    ("42731", "Atrial fibrillation"),
    ("5307", "Gastroesophageal laceration-hemorrhage syndrome"),
    ("45340", "Acute venous embolism and thrombosis of unspecified deep vessels of lower extremity"),
    ("4280", "Congestive heart failure, unspecified"),
    ("V551", "Attention to gastrostomy"),
    ("V551", "Attention to gastrostomy (duplicate row)"),  # keeps first, warns
    ("2859", "Anemia, unspecified"),
    ("486", "Pneumonia, organism unspecified"),
    ("4019", "Unspecified essential hypertension"),
    ("5409", "Acute appendicitis without mention of peritonitis"),
    ("71535", "Osteoarthrosis, localized, pelvic region and thigh"),
    ("78650", "Chest pain, unspecified"),
    ("0389", "Unspecified septicemia"),
    ("5849", "Acute kidney failure, unspecified"),
    ("5789", "Hemorrhage of gastrointestinal tract, unspecified"),
    ("2851", "Acute posthemorrhagic anemia"),
    ("5770", "Acute pancreatitis"),
]
write("D_ICD_DIAGNOSES.csv",
      ["ROW_ID", "ICD9_CODE", "SHORT_TITLE", "LONG_TITLE"],
      [(i + 1, code, title[:24], title) for i, (code, title) in enumerate(d_icd_dx)])

d_icd_proc = [
    ("431", "Percutaneous [endoscopic] gastrostomy [PEG]"),
    ("4516", "Esophagogastroduodenoscopy [EGD] with closed biopsy"),
    ("8151", "Total hip replacement"),
    ("9904", "Transfusion of packed cells"),
    ("470", "Appendectomy"),
]
write("D_ICD_PROCEDURES.csv",
      ["ROW_ID", "ICD9_CODE", "SHORT_TITLE", "LONG_TITLE"],
      [(i + 1, code, title[:24], title) for i, (code, title) in enumerate(d_icd_proc)])

d_items = [
    (211, "Heart Rate"),
    (618, "Respiratory Rate"),
    (676, "Temperature C"),
    (791, "Creatinine"),
    (813, "Hematocrit"),
    (814, "Hemoglobin"),
    (815, "INR"),
    (828, "Platelets"),
    (1286, "PT"),
    (646, "SpO2"),
]
write("D_ITEMS.csv",
      ["ROW_ID", "ITEMID", "LABEL"],
      [(i + 1, item, label) for i, (item, label) in enumerate(d_items)])

d_labitems = [
    (50912, "Creatinine"),
    (51265, "Platelet Count"),
]
write("D_LABITEMS.csv",
      ["ROW_ID", "ITEMID", "LABEL"],
      [(i + 1, item, label) for i, (item, label) in enumerate(d_labitems)])

# --- sanity checks ---------------------------------------------------------

assert len(patients) == 20, "PATIENTS.csv must hold exactly 20 data rows"
ds_901_words = len(N[9008][6].split())
ds_906_words = len(N[9016][6].split())
assert ds_901_words <= 480, f"member DS too long: {ds_901_words}"
assert ds_906_words > 520, f"overlong DS not overlong: {ds_906_words}"
print(f"wrote {len(list(OUT.glob('*.csv')))} tables to {OUT}")
print(f"DS word counts: hadm 1001 = {ds_901_words}, hadm 1006 = {ds_906_words}")
