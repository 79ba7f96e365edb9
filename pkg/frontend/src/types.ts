/** Wire types mirroring the service's JSON documents. */

export type Mode = "force_directed" | "force_layered";

export interface PersonDoc {
  id: string;
  label: string;
  birth_year?: number;
  death_year?: number;
  attributes?: Record<string, string>;
}

export interface RelationDoc {
  source: string;
  target: string;
  kind: string;
}

export interface DatasetDoc {
  meta: Record<string, string>;
  persons: PersonDoc[];
  relations: RelationDoc[];
}

export interface PositionDoc {
  id: string;
  x: number;
  y: number;
}

export interface LayersDoc {
  layer_of: Record<string, number>;
  layer_count: number;
}

export interface ReportDoc {
  node_count: number;
  edge_count: number;
  edge_crossings: number;
  node_overlaps: number;
  stress: number;
  layer_violation: number | null;
  bridge_nodes: string[];
  mode: Mode;
  runtime_ms: number;
}

export interface ModeEntryDoc {
  positions: PositionDoc[];
  layers?: LayersDoc;
  config: Record<string, unknown>;
  report?: ReportDoc;
}

export interface TraceDoc {
  ticks: { tick: number; alpha: number; positions: PositionDoc[] }[];
}

export interface LayoutDoc {
  dataset: DatasetDoc;
  modes: Partial<Record<Mode, ModeEntryDoc>>;
  trace?: TraceDoc;
}

export interface PinDoc {
  id: string;
  x: number;
  y: number;
}

export interface LayoutRequest {
  mode: Mode;
  seed: number;
  pins: PinDoc[];
  trace?: boolean;
}

export interface XY {
  x: number;
  y: number;
}
