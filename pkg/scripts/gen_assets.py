#!/usr/bin/env python3
"""Regenerate the shipped asset files (characters, terrain presets,
reference clips) under src/terrasuite/assets/.

The morphologies are parametric constructions: link dimensions, masses and
gains are chosen for plausible proportions and stable PD control, not
measured from any external source. Run from the repo root:

    python scripts/gen_assets.py
"""

import json
import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
ASSETS = ROOT / "src" / "terrasuite" / "assets"
sys.path.insert(0, str(ROOT / "src"))


def write(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {path.relative_to(ROOT)}")


def link(name, mass, hx, hy):
    return {"Name": name, "Mass": mass, "HalfExtents": [hx, hy]}


def joint(name, parent, child, ap, ac, lo, hi, tau, kp):
    return {
        "Name": name, "Parent": parent, "Child": child,
        "AnchorParent": list(ap), "AnchorChild": list(ac),
        "Limits": [lo, hi], "TorqueLimit": tau, "Kp": kp, "Kd": round(0.1 * kp, 6),
    }


# ---------------------------------------------------------------- characters

def biped7():
    links = [
        link("torso", 14.0, 0.11, 0.26),
        link("thigh_l", 4.5, 0.055, 0.21), link("shin_l", 2.5, 0.045, 0.205),
        link("foot_l", 1.0, 0.09, 0.03),
        link("thigh_r", 4.5, 0.055, 0.21), link("shin_r", 2.5, 0.045, 0.205),
        link("foot_r", 1.0, 0.09, 0.03),
    ]
    joints = []
    for side in ("l", "r"):
        joints += [
            joint(f"hip_{side}", "torso", f"thigh_{side}", (0.0, -0.26), (0.0, 0.21),
                  -1.5, 1.5, 200.0, 300.0),
            joint(f"knee_{side}", f"thigh_{side}", f"shin_{side}", (0.0, -0.21), (0.0, 0.205),
                  -2.4, 0.1, 180.0, 250.0),
            joint(f"ankle_{side}", f"shin_{side}", f"foot_{side}", (0.0, -0.205), (-0.05, 0.03),
                  -0.8, 0.8, 90.0, 100.0),
        ]
    # hip->sole: 0.26 cleared by anchor; 0.42 + 0.41 leg + 0.06 foot drop
    return {
        "Name": "biped7", "RootLink": "torso", "SpawnRootHeight": 1.151,
        "FootLinks": ["foot_l", "foot_r"], "FallLinks": ["torso"],
        "Links": links, "Joints": joints,
    }


def hopper4():
    links = [
        link("torso", 8.0, 0.15, 0.25),
        link("thigh", 3.0, 0.06, 0.17),
        link("shin", 2.0, 0.05, 0.16),
        link("foot", 1.0, 0.12, 0.03),
    ]
    joints = [
        joint("hip", "torso", "thigh", (0.0, -0.25), (0.0, 0.17), -1.2, 1.2, 180.0, 280.0),
        joint("knee", "thigh", "shin", (0.0, -0.17), (0.0, 0.16), -2.2, 0.1, 160.0, 240.0),
        joint("ankle", "shin", "foot", (0.0, -0.16), (-0.06, 0.03), -0.7, 0.7, 100.0, 120.0),
    ]
    return {
        "Name": "hopper4", "RootLink": "torso", "SpawnRootHeight": 0.971,
        "FootLinks": ["foot"], "FallLinks": ["torso"],
        "Links": links, "Joints": joints,
    }


def raptor19():
    links = [
        link("pelvis", 7.0, 0.10, 0.09),
        link("spine", 5.0, 0.09, 0.08), link("chest", 6.0, 0.10, 0.09),
        link("neck1", 1.0, 0.05, 0.04), link("neck2", 1.0, 0.05, 0.04),
        link("head", 2.0, 0.09, 0.05),
        link("tail1", 1.4, 0.09, 0.05), link("tail2", 1.0, 0.08, 0.04),
        link("tail3", 0.8, 0.08, 0.035), link("tail4", 0.6, 0.07, 0.03),
        link("tail5", 0.4, 0.07, 0.025),
    ]
    joints = [
        joint("spine", "pelvis", "spine", (0.10, 0.02), (-0.09, 0.0), -0.5, 0.5, 200.0, 400.0),
        joint("chest", "spine", "chest", (0.09, 0.0), (-0.10, 0.0), -0.5, 0.5, 200.0, 400.0),
        joint("neck1", "chest", "neck1", (0.10, 0.05), (-0.05, 0.0), -0.8, 0.8, 60.0, 100.0),
        joint("neck2", "neck1", "neck2", (0.05, 0.0), (-0.05, 0.0), -0.8, 0.8, 60.0, 100.0),
        joint("head", "neck2", "head", (0.05, 0.0), (-0.09, 0.0), -0.8, 0.8, 40.0, 80.0),
        joint("tail1", "pelvis", "tail1", (-0.10, 0.02), (0.09, 0.0), -0.6, 0.6, 40.0, 60.0),
        joint("tail2", "tail1", "tail2", (-0.09, 0.0), (0.08, 0.0), -0.6, 0.6, 40.0, 60.0),
        joint("tail3", "tail2", "tail3", (-0.08, 0.0), (0.08, 0.0), -0.6, 0.6, 30.0, 50.0),
        joint("tail4", "tail3", "tail4", (-0.08, 0.0), (0.07, 0.0), -0.6, 0.6, 30.0, 50.0),
        joint("tail5", "tail4", "tail5", (-0.07, 0.0), (0.07, 0.0), -0.6, 0.6, 20.0, 40.0),
    ]
    for side in ("l", "r"):
        links += [
            link(f"thigh_{side}", 3.5, 0.055, 0.16), link(f"shin_{side}", 1.8, 0.04, 0.15),
            link(f"tarsus_{side}", 1.0, 0.03, 0.12), link(f"foot_{side}", 0.7, 0.10, 0.025),
        ]
        joints += [
            joint(f"hip_{side}", "pelvis", f"thigh_{side}", (0.0, -0.09), (0.0, 0.16),
                  -1.5, 1.5, 220.0, 350.0),
            joint(f"knee_{side}", f"thigh_{side}", f"shin_{side}", (0.0, -0.16), (0.0, 0.15),
                  -2.3, 0.1, 180.0, 280.0),
            joint(f"tarsus_{side}", f"shin_{side}", f"tarsus_{side}", (0.0, -0.15), (0.0, 0.12),
                  -0.1, 1.6, 120.0, 160.0),
            joint(f"ankle_{side}", f"tarsus_{side}", f"foot_{side}", (0.0, -0.12), (-0.05, 0.025),
                  -0.7, 0.7, 80.0, 90.0),
        ]
    # hip at pelvis-0.09; leg 0.32+0.30+0.24; foot drop 0.05
    return {
        "Name": "raptor19", "RootLink": "pelvis", "SpawnRootHeight": 1.001,
        "FootLinks": ["foot_l", "foot_r"], "FallLinks": ["head", "chest", "pelvis"],
        "Links": links, "Joints": joints,
    }


def dog21():
    links = [
        link("pelvis", 5.0, 0.09, 0.07),
        link("spine1", 4.0, 0.09, 0.065), link("spine2", 4.0, 0.09, 0.065),
        link("chest", 6.0, 0.10, 0.08),
        link("neck", 1.5, 0.06, 0.04), link("head", 2.5, 0.08, 0.05),
        link("tail", 0.5, 0.08, 0.02),
    ]
    joints = [
        joint("spine1", "pelvis", "spine1", (0.09, 0.0), (-0.09, 0.0), -0.5, 0.5, 180.0, 360.0),
        joint("spine2", "spine1", "spine2", (0.09, 0.0), (-0.09, 0.0), -0.5, 0.5, 180.0, 360.0),
        joint("chest", "spine2", "chest", (0.09, 0.0), (-0.10, 0.0), -0.5, 0.5, 180.0, 360.0),
        joint("neck", "chest", "neck", (0.08, 0.06), (-0.06, 0.0), -0.9, 0.9, 60.0, 100.0),
        joint("head", "neck", "head", (0.06, 0.0), (-0.08, 0.0), -0.9, 0.9, 40.0, 70.0),
        joint("tail", "pelvis", "tail", (-0.09, 0.03), (0.08, 0.0), -0.8, 0.8, 20.0, 30.0),
    ]
    for side in ("l", "r"):
        links += [
            link(f"thigh_{side}", 2.5, 0.05, 0.15), link(f"shin_{side}", 1.5, 0.04, 0.13),
            link(f"hock_{side}", 0.8, 0.03, 0.09), link(f"hfoot_{side}", 0.5, 0.07, 0.02),
        ]
        joints += [
            joint(f"hip_{side}", "pelvis", f"thigh_{side}", (0.0, -0.07), (0.0, 0.15),
                  -1.0, 1.0, 160.0, 300.0),
            joint(f"knee_{side}", f"thigh_{side}", f"shin_{side}", (0.0, -0.15), (0.0, 0.13),
                  -2.0, 0.1, 120.0, 220.0),
            joint(f"hock_{side}", f"shin_{side}", f"hock_{side}", (0.0, -0.13), (0.0, 0.09),
                  -0.1, 1.5, 90.0, 140.0),
            joint(f"hankle_{side}", f"hock_{side}", f"hfoot_{side}", (0.0, -0.09), (-0.04, 0.02),
                  -0.7, 0.7, 60.0, 80.0),
        ]
    for side in ("l", "r"):
        links += [
            link(f"upper_{side}", 2.2, 0.045, 0.19), link(f"fore_{side}", 1.3, 0.035, 0.175),
            link(f"ffoot_{side}", 0.5, 0.07, 0.02),
        ]
        joints += [
            joint(f"shoulder_{side}", "chest", f"upper_{side}", (0.0, -0.08), (0.0, 0.19),
                  -1.0, 1.0, 160.0, 300.0),
            joint(f"elbow_{side}", f"upper_{side}", f"fore_{side}", (0.0, -0.19), (0.0, 0.175),
                  -0.1, 2.0, 120.0, 220.0),
            joint(f"fankle_{side}", f"fore_{side}", f"ffoot_{side}", (0.0, -0.175), (-0.04, 0.02),
                  -0.7, 0.7, 60.0, 80.0),
        ]
    # hind: 0.07 + 0.30 + 0.26 + 0.18 + 0.04; front: 0.08 + 0.38 + 0.35 + 0.04
    return {
        "Name": "dog21", "RootLink": "pelvis", "SpawnRootHeight": 0.851,
        "FootLinks": ["hfoot_l", "hfoot_r", "ffoot_l", "ffoot_r"],
        "FallLinks": ["head", "chest", "pelvis"],
        "Links": links, "Joints": joints,
    }


# ------------------------------------------------------------ terrain presets

LISTING_GAP = {"GapSpacingMin": 3, "GapSpacingMax": 4, "GapWMin": 0.3,
               "GapWMax": 0.5, "GapHMin": -2, "GapHMax": -2}
LISTING_WALL = {"WallSpacingMin": 3, "WallSpacingMax": 4, "WallWMin": 0.2,
                "WallWMax": 0.2, "WallHMin": 0.25, "WallHMax": 0.4}
LISTING_STEP = {"StepSpacingMin": 3, "StepSpacingMax": 4, "StepH0Min": 0.1,
                "StepH0Max": 0.3, "StepH1Min": -0.3, "StepH1Max": -0.1}
LISTING_SLOPE = {"SlopeDeltaRange": 0.05, "SlopeDeltaMin": -0.5, "SlopeDeltaMax": 0.5}


def terrain_presets():
    def doc(type_name, *groups):
        fields = {}
        for g in groups:
            fields.update(g)
        return {"Type": type_name, "Params": [fields] if fields else []}

    return {
        "flat": doc("var2d_flat"),
        "gaps": doc("var2d_gaps",
                    {"GapSpacingMin": 3, "GapSpacingMax": 4, "GapWMin": 0.3,
                     "GapWMax": 0.8, "GapHMin": -2, "GapHMax": -2}),
        "narrow-gaps": doc("var2d_narrow_gaps",
                           {"GapSpacingMin": 1.0, "GapSpacingMax": 2.0, "GapWMin": 0.25,
                            "GapWMax": 0.5, "GapHMin": -2, "GapHMax": -2}),
        "tight-gaps": doc("var2d_tight_gaps",
                          {"GapSpacingMin": 0.6, "GapSpacingMax": 1.2, "GapWMin": 0.2,
                           "GapWMax": 0.35, "GapHMin": -2, "GapHMax": -2}),
        "walls": doc("var2d_walls", LISTING_WALL),
        "steps": doc("var2d_steps", LISTING_STEP),
        "cliffs": doc("var2d_cliffs",
                      {"StepSpacingMin": 4, "StepSpacingMax": 6, "StepH0Min": 0.5,
                       "StepH0Max": 1.0, "StepH1Min": -1.0, "StepH1Max": -0.5}),
        "slopes": doc("var2d_slopes",
                      {"SlopeDeltaRange": 0.1, "SlopeDeltaMin": -0.5, "SlopeDeltaMax": 0.5}),
        "incline": doc("var2d_incline",
                       {"SlopeDeltaRange": 0.0, "SlopeDeltaMin": 0.05, "SlopeDeltaMax": 0.3}),
        "mixed": doc("var2d_mixed", LISTING_GAP, LISTING_WALL, LISTING_STEP),
        "slopes-mixed": doc("var2d_slopes_mixed",
                            LISTING_GAP, LISTING_WALL, LISTING_STEP, LISTING_SLOPE),
        "slopes-gaps": doc("var2d_slopes_gaps", LISTING_GAP, LISTING_SLOPE),
        "slopes-steps": doc("var2d_slopes_steps", LISTING_STEP, LISTING_SLOPE),
        "slopes-walls": doc("var2d_slopes_walls", LISTING_WALL, LISTING_SLOPE),
    }


# -------------------------------------------------------------------- clips

def _gait_patterns(char_name):
    """(amplitude, phase offset, mean) per joint-name pattern. Joints not
    matched sway gently so the reference stays dynamic everywhere."""
    two_pi = 2 * math.pi
    if char_name == "biped7":
        return {
            "hip_l": (0.5, 0.0, 0.0), "hip_r": (0.5, math.pi, 0.0),
            "knee_l": (0.35, math.pi / 2, -0.55), "knee_r": (0.35, math.pi / 2 + math.pi, -0.55),
            "ankle_l": (0.15, math.pi, 0.0), "ankle_r": (0.15, 0.0, 0.0),
        }, 1.0
    if char_name == "hopper4":
        return {
            "hip": (0.3, 0.0, 0.0),
            "knee": (0.4, math.pi / 2, -0.55),
            "ankle": (0.2, math.pi, 0.0),
        }, 0.6
    if char_name == "raptor19":
        pat = {
            "hip_l": (0.45, 0.0, 0.0), "hip_r": (0.45, math.pi, 0.0),
            "knee_l": (0.3, math.pi / 2, -0.5), "knee_r": (0.3, math.pi / 2 + math.pi, -0.5),
            "tarsus_l": (0.25, math.pi, 0.5), "tarsus_r": (0.25, 0.0, 0.5),
            "ankle_l": (0.1, 0.0, 0.0), "ankle_r": (0.1, math.pi, 0.0),
        }
        for i, name in enumerate(("spine", "chest", "neck1", "neck2", "head")):
            pat[name] = (0.06, 0.4 * i, 0.0)
        for i in range(1, 6):
            pat[f"tail{i}"] = (0.08, 0.5 * i, 0.0)
        return pat, 0.8
    # dog21, trot: diagonal pairs in phase
    pat = {
        "hip_l": (0.4, 0.0, 0.0), "hip_r": (0.4, math.pi, 0.0),
        "knee_l": (0.25, math.pi / 2, -0.45), "knee_r": (0.25, math.pi / 2 + math.pi, -0.45),
        "hock_l": (0.2, math.pi, 0.45), "hock_r": (0.2, 0.0, 0.45),
        "hankle_l": (0.1, 0.0, 0.0), "hankle_r": (0.1, math.pi, 0.0),
        "shoulder_l": (0.4, math.pi, 0.0), "shoulder_r": (0.4, 0.0, 0.0),
        "elbow_l": (0.25, 3 * math.pi / 2, 0.5), "elbow_r": (0.25, math.pi / 2, 0.5),
        "fankle_l": (0.1, math.pi, 0.0), "fankle_r": (0.1, 0.0, 0.0),
    }
    for i, name in enumerate(("spine1", "spine2", "chest", "neck", "head", "tail")):
        pat[name] = (0.05, 0.3 * i, 0.0)
    return pat, 0.7


def make_clip(char_doc):
    from terrasuite.character.model import load_character  # after sys.path tweak

    model = load_character(json.dumps(char_doc))
    patterns, duration = _gait_patterns(model.name)
    k = 16
    keyframes = []
    for ki in range(k):
        phase = ki / k
        angles = []
        for j in model.joints:
            amp, off, mean = patterns.get(j.name, (0.03, 0.0, 0.0))
            a = mean + amp * math.sin(2 * math.pi * phase + off)
            lo, hi = j.angle_limits
            angles.append(round(min(max(a, lo), hi), 6))
        keyframes.append({
            "Phase": round(phase, 6),
            "JointAngles": angles,
            "RootHeight": round(model.spawn_root_height + 0.02 * math.sin(4 * math.pi * phase), 6),
            "RootSpeed": round(1.0 + 0.1 * math.sin(2 * math.pi * phase), 6),
        })
    return {
        "Name": f"{model.name}_walk",
        "Character": model.name,
        "Duration": duration,
        "Keyframes": keyframes,
    }


def main():
    chars = [biped7(), raptor19(), dog21(), hopper4()]
    for doc in chars:
        write(ASSETS / "characters" / f"{doc['Name']}.json", doc)
    for name, doc in terrain_presets().items():
        write(ASSETS / "terrains" / f"{name}.json", doc)
    for doc in chars:
        clip = make_clip(doc)
        write(ASSETS / "clips" / f"{doc['Name']}_walk.json", clip)


if __name__ == "__main__":
    main()
