import { attr, esc } from "../html.js";
import type { IngredientsPayload } from "../types.js";

export interface ProblemView {
  /** Explicit user choice; overrides any machine suggestion. */
  keyIngredient: string | null;
  /** Machine-suggested key ingredient, shown preselected until overridden. */
  suggestedKeyIngredient?: string | null;
  cuisines: string[];
  dishType: string | null;
  minIngredients: number;
  maxIngredients: number;
}

export function defaultProblemView(): ProblemView {
  return {
    keyIngredient: null,
    suggestedKeyIngredient: null,
    cuisines: [],
    dishType: null,
    minIngredients: 3,
    maxIngredients: 12,
  };
}

/** The user's explicit pick beats the machine suggestion. */
export function effectiveKeyIngredient(view: ProblemView): string | null {
  return view.keyIngredient ?? view.suggestedKeyIngredient ?? null;
}

export function canSubmitProblem(view: ProblemView): boolean {
  return (
    effectiveKeyIngredient(view) !== null &&
    view.dishType !== null &&
    view.cuisines.length > 0
  );
}

export function renderProblemScreen(
  data: IngredientsPayload,
  view: ProblemView,
): string {
  const key = effectiveKeyIngredient(view);
  const options = data.ingredients
    .map((ing) => {
      const selected = ing.id === key ? " selected" : "";
      return (
        `<option ${attr("value", ing.id)}${selected}>` +
        `${esc(ing.name)} (${esc(ing.category)}, ${esc(ing.commonness)})</option>`
      );
    })
    .join("\n");

  const cuisineBoxes = data.cuisines
    .map((c) => {
      const checked = view.cuisines.includes(c) ? " checked" : "";
      return (
        `<label><input type="checkbox" name="cuisine" ${attr("value", c)}${checked}>` +
        ` ${esc(c)}</label>`
      );
    })
    .join("\n");

  const dishOptions = data.dish_types
    .map((d) => {
      const selected = d === view.dishType ? " selected" : "";
      return `<option ${attr("value", d)}${selected}>${esc(d)}</option>`;
    })
    .join("\n");

  const disabled = canSubmitProblem(view) ? "" : " disabled";
  return `<section class="screen problem-screen">
<h1>Find a problem</h1>
<form id="problem-form">
<label for="key-ingredient">Key ingredient</label>
<select id="key-ingredient" name="key_ingredient">
<option value="">choose...</option>
${options}
</select>
<fieldset id="cuisines"><legend>Cuisines</legend>
${cuisineBoxes}
</fieldset>
<label for="dish-type">Dish type</label>
<select id="dish-type" name="dish_type">
<option value="">choose...</option>
${dishOptions}
</select>
<label>Ingredients <input type="number" name="min_ingredients" min="1" ${attr("value", view.minIngredients)}>
to <input type="number" name="max_ingredients" min="1" ${attr("value", view.maxIngredients)}></label>
<button type="submit" id="generate-button"${disabled}>Generate ideas</button>
</form>
</section>`;
}
