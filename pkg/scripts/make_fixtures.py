"""Regenerate the bundled data fixtures under src/muse/data/.

Deterministic: re-running produces byte-identical files.
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "muse" / "data"

INGREDIENTS = [
    # (name, category, cuisines, seasons)
    ("chicken", "protein", "french|indian|mexican", ""),
    ("beef", "protein", "french|mexican", ""),
    ("shrimp", "protein", "spanish|japanese", "summer"),
    ("tofu", "protein", "japanese", ""),
    ("egg", "protein", "french|japanese", ""),
    ("salmon", "protein", "japanese|french", "spring"),
    ("onion", "vegetable", "french|italian|indian|mexican|spanish", ""),
    ("garlic", "vegetable", "italian|spanish|indian", ""),
    ("tomato", "vegetable", "italian|spanish|mexican", "summer"),
    ("carrot", "vegetable", "french", "autumn"),
    ("potato", "vegetable", "french|indian|spanish", "autumn"),
    ("spinach", "vegetable", "indian|french", "spring"),
    ("bell pepper", "vegetable", "spanish|mexican", "summer"),
    ("mushroom", "vegetable", "french|japanese", "autumn"),
    ("zucchini", "vegetable", "italian|french", "summer"),
    ("lemon", "fruit", "french|italian", ""),
    ("apple", "fruit", "french", "autumn"),
    ("plantain", "fruit", "mexican", ""),
    ("mango", "fruit", "indian", "summer"),
    ("milk", "dairy", "french", ""),
    ("cream", "dairy", "french", ""),
    ("parmesan", "dairy", "italian", ""),
    ("yogurt", "dairy", "indian", ""),
    ("butter", "fat", "french", ""),
    ("olive oil", "fat", "italian|spanish", ""),
    ("rice", "grain", "japanese|spanish|indian", ""),
    ("pasta", "grain", "italian", ""),
    ("flour", "grain", "french|italian", ""),
    ("bread", "grain", "french", ""),
    ("cumin", "spice", "indian|mexican", ""),
    ("paprika", "spice", "spanish", ""),
    ("saffron", "spice", "spanish|indian", ""),
    ("cinnamon", "spice", "indian|mexican", ""),
    ("black pepper", "spice", "french|italian", ""),
    ("basil", "herb", "italian", "summer"),
    ("cilantro", "herb", "mexican|indian", ""),
    ("thyme", "herb", "french", ""),
    ("chicken stock", "liquid", "french", ""),
    ("soy sauce", "liquid", "japanese", ""),
    ("sugar", "sweetener", "french|mexican", ""),
]
assert len(INGREDIENTS) == 40

COMPOUND_NAMES = [
    "limonene", "vanillin", "eugenol", "linalool", "geraniol", "citral",
    "hexanal", "furaneol", "benzaldehyde", "cinnamaldehyde", "diacetyl",
    "ethyl acetate", "methional", "sotolon", "thymol", "carvone",
    "estragole", "nonanal", "octanol", "decalactone", "guaiacol",
    "pyrazine", "menthol", "anethole", "maltol",
]
assert len(COMPOUND_NAMES) == 25

FEATURES = ["molecular_weight", "tpsa", "complexity",
            "rotatable_bonds", "h_bond_acceptors", "heavy_atoms"]


def write_compounds(rng: random.Random) -> list[str]:
    ids = [f"c{i + 1:02d}" for i in range(25)]
    with open(DATA / "compounds.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["compound_id", "name"] + [f"feature:{f}" for f in FEATURES]
                   + ["pleasantness"])
        for n, (cid, name) in enumerate(zip(ids, COMPOUND_NAMES)):
            feats = {
                "molecular_weight": round(rng.uniform(80, 300), 2),
                "tpsa": round(rng.uniform(0, 90), 2),
                "complexity": round(rng.uniform(40, 400), 1),
                "rotatable_bonds": rng.randint(0, 9),
                "h_bond_acceptors": rng.randint(0, 6),
                "heavy_atoms": rng.randint(6, 22),
            }
            # labels follow a noisy linear law in two descriptors
            if n < 16:
                raw = (0.9 - 0.004 * feats["tpsa"] - 0.002 * feats["molecular_weight"]
                       + rng.gauss(0, 0.04))
                label = f"{min(1.0, max(0.0, raw)):.4f}"
            else:
                label = ""
            w.writerow([cid, name] + [feats[f] for f in FEATURES] + [label])
    return ids


def write_ingredient_compounds(rng: random.Random, compound_ids: list[str]) -> None:
    rows = []
    for name, category, _, _ in INGREDIENTS:
        k = rng.randint(3, 8)
        # category biases compound choice so same-category ingredients share compounds
        offset = sum(map(ord, category)) % 10
        pool = sorted(rng.sample(range(25), k=min(25, k + 6)))
        chosen = sorted({(p + offset) % 25 for p in pool})[:k]
        for c in chosen:
            ppm = round(rng.uniform(0.5, 800), 1)
            rows.append([name, compound_ids[c], ppm])
    # a couple of blank concentrations exercise the median-default path
    rows[3][2] = ""
    rows[57][2] = ""
    with open(DATA / "ingredient_compounds.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ingredient_id", "compound_id", "ppm"])
        w.writerows(rows)


def write_ingredients() -> None:
    with open(DATA / "ingredients.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ingredient_id", "name", "category", "cuisines", "seasons"])
        for name, category, cuisines, seasons in INGREDIENTS:
            w.writerow([name, name, category, cuisines, seasons])


def write_cuisines(rng: random.Random) -> None:
    cuisine_names = {"french": "French", "italian": "Italian", "spanish": "Spanish",
                     "indian": "Indian", "mexican": "Mexican", "japanese": "Japanese"}
    with open(DATA / "cuisines.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cuisine_id", "name", "ingredient_id", "typicality"])
        for cid in sorted(cuisine_names):
            for name, _, cuisines, _ in INGREDIENTS:
                if cid in cuisines.split("|"):
                    w.writerow([cid, cuisine_names[cid], name,
                                round(rng.uniform(0.4, 1.0), 2)])


DISH_PROFILES = {
    "soup": dict(liquids=["chicken stock"], verbs="simmer", n=(4, 7)),
    "stew": dict(liquids=["chicken stock"], verbs="simmer", n=(5, 8)),
    "salad": dict(liquids=[], verbs="toss", n=(4, 6)),
    "pasta": dict(liquids=[], verbs="boil", n=(4, 7)),
    "quiche": dict(liquids=["milk"], verbs="bake", n=(5, 8)),
    "dessert": dict(liquids=["milk"], verbs="bake", n=(4, 6)),
}

UNIT_BY_CATEGORY = {
    "protein": ("pound", (1, 2)), "vegetable": ("cup", (1, 3)),
    "fruit": ("piece", (1, 3)), "dairy": ("cup", (1, 2)),
    "grain": ("cup", (1, 3)), "spice": ("teaspoon", (1, 3)),
    "herb": ("tablespoon", (1, 2)), "fat": ("tablespoon", (1, 4)),
    "liquid": ("cup", (2, 4)), "sweetener": ("tablespoon", (1, 3)),
}

STATES_BY_CATEGORY = {
    "vegetable": ["chopped", "diced", "sliced", ""],
    "herb": ["chopped", "fresh", ""],
    "protein": ["diced", "sliced", ""],
    "dairy": [""], "grain": [""], "fruit": ["sliced", "peeled", ""],
    "fat": ["melted", ""], "spice": ["ground", ""], "liquid": [""],
    "sweetener": [""],
}


def make_steps(rng: random.Random, names: list[str], dish: str) -> list[str]:
    steps = []
    veg = [n for n in names if n in {i[0] for i in INGREDIENTS if i[1] in ("vegetable", "herb")}]
    main = [n for n in names if n not in veg] or names
    if veg:
        steps.append(f"Chop the {' and '.join(veg[:2])}.")
        steps.append(f"Fry the {veg[0]} in a skillet for {rng.randint(3, 8)} minutes.")
    steps.append(f"Mix the {main[0]} with the {names[-1]} in a bowl.")
    if dish in ("soup", "stew"):
        steps.append(f"Add the {main[0]} and simmer in a pot for {rng.randint(15, 40)} minutes.")
    elif dish == "pasta":
        steps.append(f"Boil the {main[0]} in a pot for {rng.randint(8, 12)} minutes.")
    elif dish in ("quiche", "dessert"):
        steps.append(f"Bake in the oven for {rng.randint(25, 45)} minutes.")
        steps.append("Cool for 10 minutes.")
    else:
        steps.append(f"Toss the {names[0]} with the {names[-1]} in a bowl.")
    steps.append("Serve.")
    return steps


def write_recipes(rng: random.Random) -> None:
    by_cat: dict[str, list[str]] = {}
    cuisines_of = {name: set(c.split("|")) - {""} for name, _, c, _ in INGREDIENTS}
    for name, cat, _, _ in INGREDIENTS:
        by_cat.setdefault(cat, []).append(name)

    dishes = list(DISH_PROFILES)
    recipes = []
    for n in range(200):
        dish = dishes[n % len(dishes)]
        prof = DISH_PROFILES[dish]
        cuisine = rng.choice(["french", "italian", "spanish", "indian", "mexican", "japanese"])
        count = rng.randint(*prof["n"])
        pool = [i for i in cuisines_of if cuisine in cuisines_of[i]]
        base = rng.sample(sorted(pool), k=min(count, len(pool)))
        names = sorted(set(base) | set(prof["liquids"]))
        if dish == "quiche":
            names = sorted(set(names) | {"egg", "flour", "butter"})
        if dish == "dessert":
            names = sorted(set(names) | {"sugar", "flour"})
        cats = {name: cat for name, cat, _, _ in INGREDIENTS}
        ings = []
        for name in names:
            unit, (lo, hi) = UNIT_BY_CATEGORY[cats[name]]
            state = rng.choice(STATES_BY_CATEGORY[cats[name]]) or None
            qty = rng.choice([lo, hi, (lo + hi) / 2.0])
            entry = {"ingredient_id": name, "qty": qty, "unit": unit}
            if state:
                entry["state"] = state
            ings.append(entry)
        recipes.append({
            "title": f"{cuisine.title()} {dish} #{n + 1}",
            "dish_type": dish,
            "cuisine": cuisine,
            "ingredients": ings,
            "steps": make_steps(rng, names, dish),
        })

    # hand-built quiche exemplar mirroring the parallel-cook walkthrough
    recipes[4] = {
        "title": "Classic vegetable quiche",
        "dish_type": "quiche",
        "cuisine": "french",
        "ingredients": [
            {"ingredient_id": "onion", "qty": 1, "unit": "cup", "state": "chopped"},
            {"ingredient_id": "spinach", "qty": 2, "unit": "cup", "state": "chopped"},
            {"ingredient_id": "egg", "qty": 4, "unit": "piece"},
            {"ingredient_id": "milk", "qty": 1, "unit": "cup"},
            {"ingredient_id": "cream", "qty": 0.5, "unit": "cup"},
            {"ingredient_id": "flour", "qty": 2, "unit": "cup"},
            {"ingredient_id": "butter", "qty": 0.5, "unit": "cup", "state": "softened"},
        ],
        "steps": [
            "Chop the onion and spinach.",
            "Fry the onion and spinach in a skillet for 6 minutes.",
            "Mix the egg with the milk and cream in a bowl.",
            "Roll the flour and butter with a rolling pin.",
            "Combine the fried vegetables with the egg mixture.",
            "Bake in the oven for 35 minutes.",
            "Cool for 15 minutes.",
            "Serve.",
        ],
    }

    with open(DATA / "recipes.jsonl", "w") as fh:
        for r in recipes:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


def write_ingredient_eval(rng: random.Random) -> None:
    cats = {name: cat for name, cat, _, _ in INGREDIENTS}
    cases = []
    # hand cases covering each grammar branch
    cases += [
        {"text": "2 cups chopped onions",
         "gold": {"qty": "2", "unit": "cup", "state": "chopped", "name": "onion"}},
        {"text": "salt", "gold": {"qty": None, "unit": None, "state": None, "name": "salt"}},
        {"text": "1 1/2 tbsp olive oil",
         "gold": {"qty": "3/2", "unit": "tablespoon", "state": None, "name": "olive oil"}},
        {"text": "½ cup milk",
         "gold": {"qty": "1/2", "unit": "cup", "state": None, "name": "milk"}},
        {"text": "3 cloves garlic, minced",
         "gold": {"qty": "3", "unit": "clove", "state": "minced", "name": "garlic"}},
        {"text": "0.5 tsp ground cumin",
         "gold": {"qty": "1/2", "unit": "teaspoon", "state": "ground", "name": "cumin"}},
        {"text": "1 pinch of saffron",
         "gold": {"qty": "1", "unit": "pinch", "state": None, "name": "saffron"}},
        {"text": "2 lbs beef, diced",
         "gold": {"qty": "2", "unit": "pound", "state": "diced", "name": "beef"}},
        {"text": "fresh basil",
         "gold": {"qty": None, "unit": None, "state": "fresh", "name": "basil"}},
        {"text": "1½ cups flour",
         "gold": {"qty": "3/2", "unit": "cup", "state": None, "name": "flour"}},
        {"text": "3/4 cup grated parmesan",
         "gold": {"qty": "3/4", "unit": "cup", "state": "grated", "name": "parmesan"}},
        {"text": "a drizzle of good balsamic",
         "gold": {"qty": None, "unit": None, "state": None, "name": "a drizzle of good balsamic"}},
        # known-hard lines: ranges and parenthetical commentary defeat the grammar
        {"text": "2-3 cups flour",
         "gold": {"qty": "2", "unit": "cup", "state": None, "name": "flour"}},
        {"text": "1 cup rice (we always use basmati)",
         "gold": {"qty": "1", "unit": "cup", "state": None, "name": "rice"}},
    ]
    while len(cases) < 100:
        name = rng.choice(sorted(cats))
        unit, (lo, hi) = UNIT_BY_CATEGORY[cats[name]]
        state = rng.choice(STATES_BY_CATEGORY[cats[name]]) or None
        qty = rng.choice([str(lo), str(hi), f"{lo} 1/2"])
        text_qty = qty
        gold_qty = str(lo + 0.5).rstrip("0").rstrip(".") if " " in qty else qty
        if " 1/2" in qty:
            gold_qty = f"{2 * lo + 1}/2"
        unit_alias = rng.choice({"cup": ["cup", "cups", "c"], "tablespoon": ["tbsp", "tablespoons"],
                                 "teaspoon": ["tsp", "teaspoons"], "pound": ["lb", "pounds"],
                                 "piece": ["pieces", "piece"]}.get(unit, [unit]))
        parts = [text_qty, unit_alias]
        if state:
            parts.append(state)
        parts.append(name)
        cases.append({"text": " ".join(parts),
                      "gold": {"qty": gold_qty, "unit": unit, "state": state, "name": name}})
    with open(DATA / "ingredient_eval.jsonl", "w") as fh:
        for c in cases:
            fh.write(json.dumps(c, sort_keys=True) + "\n")


def write_parser_eval(rng: random.Random) -> None:
    cases = [
        {"text": "Fry the onions in a skillet for 5 minutes.",
         "known": ["onion", "garlic"],
         "gold": {"action": "fry", "tool": "skillet", "ingredients": ["onion"], "duration": 5}},
        {"text": "Serve.", "known": ["onion"],
         "gold": {"action": "serve", "tool": None, "ingredients": [], "duration": None}},
        {"text": "Whisk the eggs with the milk in a bowl.",
         "known": ["egg", "milk", "flour"],
         "gold": {"action": "mix", "tool": "bowl", "ingredients": ["egg", "milk"], "duration": None}},
        {"text": "Simmer the stew in a pot for 1 hour.",
         "known": ["beef", "carrot"],
         "gold": {"action": "simmer", "tool": "pot", "ingredients": [], "duration": 60}},
        {"text": "Bake in the oven for 35 minutes.",
         "known": ["flour", "butter"],
         "gold": {"action": "bake", "tool": "oven", "ingredients": [], "duration": 35}},
        {"text": "Season to taste.", "known": ["chicken"],
         "gold": {"action": "season", "tool": None, "ingredients": [], "duration": None}},
        {"text": "Let it rest; do not stir.", "known": ["rice"],
         "gold": {"action": "rest", "tool": None, "ingredients": [], "duration": None}},
        {"text": "Gently fold the spinach into the batter.",
         "known": ["spinach", "flour"],
         "gold": {"action": "mix", "tool": None, "ingredients": ["spinach"], "duration": None}},
        # known-hard sentences: no lexicon verb, vague duration
        {"text": "Continue cooking until the sauce thickens.",
         "known": ["tomato", "cream"],
         "gold": {"action": "simmer", "tool": None, "ingredients": [], "duration": None}},
        {"text": "Fry the garlic for a couple of minutes.",
         "known": ["garlic"],
         "gold": {"action": "fry", "tool": None, "ingredients": ["garlic"], "duration": 2}},
    ]
    verbs = [("chop", "Chop the {a} and the {b}.", None),
             ("fry", "Fry the {a} in a skillet for {n} minutes.", "skillet"),
             ("simmer", "Simmer the {a} in a pot for {n} minutes.", "pot"),
             ("mix", "Mix the {a} with the {b} in a bowl.", "bowl"),
             ("boil", "Boil the {a} for {n} minutes.", None),
             ("toss", "Toss the {a} with the {b}.", None),
             ("bake", "Bake the {a} in the oven for {n} minutes.", "oven"),
             ("grate", "Grate the {a} with a grater.", "grater")]
    names = sorted({i[0] for i in INGREDIENTS})
    while len(cases) < 50:
        action, template, tool = rng.choice(verbs)
        a, b = rng.sample(names, k=2)
        n = rng.randint(2, 45)
        text = template.format(a=a, b=b, n=n)
        mentioned = [x for x in (a, b) if x in text]
        cases.append({"text": text, "known": sorted([a, b]),
                      "gold": {"action": action, "tool": tool,
                               "ingredients": sorted(mentioned),
                               "duration": n if "{n}" in template else None}})
    with open(DATA / "parser_eval.jsonl", "w") as fh:
        for c in cases:
            fh.write(json.dumps(c, sort_keys=True) + "\n")


def write_action_durations() -> None:
    durations = {
        "chop": 5, "slice": 4, "mix": 5, "fry": 8, "bake": 35, "boil": 12,
        "simmer": 25, "grill": 10, "steam": 12, "season": 1, "add": 1,
        "pour": 1, "heat": 5, "cool": 15, "serve": 2, "knead": 10, "roll": 6,
        "spread": 2, "drain": 2, "marinate": 30, "toss": 2, "top": 2,
        "cover": 1, "remove": 1, "reduce": 10, "melt": 4, "beat": 4,
        "mash": 5, "peel": 4, "grate": 4, "rest": 10, "unknown": 5, "raw": 5,
    }
    with open(DATA / "action_durations.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["action", "default_minutes"])
        for action in sorted(durations):
            w.writerow([action, durations[action]])


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240817)
    compound_ids = write_compounds(rng)
    write_ingredient_compounds(rng, compound_ids)
    write_ingredients()
    write_cuisines(rng)
    write_recipes(rng)
    write_ingredient_eval(rng)
    write_parser_eval(rng)
    write_action_durations()
    print("fixtures written to", DATA)


if __name__ == "__main__":
    main()
