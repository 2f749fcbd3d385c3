import type { PlanGraph } from "./types.js";

/** Longest-path layering: a node's layer is one past its deepest predecessor.
 * Produces the left-to-right column placement of the plan DAG. */
export function assignLayers(graph: PlanGraph): Map<string, number> {
  const preds = new Map<string, string[]>();
  for (const node of graph.nodes) preds.set(node.id, []);
  for (const [a, b] of graph.edges) {
    const list = preds.get(b);
    if (list === undefined || !preds.has(a)) {
      throw new Error(`edge references unknown node: ${a} -> ${b}`);
    }
    list.push(a);
  }

  const layers = new Map<string, number>();
  const visiting = new Set<string>();
  const layerOf = (id: string): number => {
    const known = layers.get(id);
    if (known !== undefined) return known;
    if (visiting.has(id)) throw new Error("plan graph contains a cycle");
    visiting.add(id);
    const ps = preds.get(id)!;
    const layer = ps.length === 0 ? 0 : 1 + Math.max(...ps.map(layerOf));
    visiting.delete(id);
    layers.set(id, layer);
    return layer;
  };
  for (const node of graph.nodes) layerOf(node.id);
  return layers;
}

/** Nodes grouped per layer, layers ascending, stable order within a layer. */
export function layerColumns(graph: PlanGraph): string[][] {
  const layers = assignLayers(graph);
  const depth = Math.max(...layers.values(), 0);
  const columns: string[][] = Array.from({ length: depth + 1 }, () => []);
  for (const node of graph.nodes) columns[layers.get(node.id)!].push(node.id);
  return columns;
}
