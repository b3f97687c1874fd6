// Wire types for the retrieval API. Field names mirror the JSON exactly;
// nothing here is renamed or recomputed on the client side.

export interface MatchScores {
  readonly t_sim: number;
  readonly h_sim: number;
  readonly c_sim: number;
  readonly n_sim: number;
  readonly jaccard?: number;
}

export interface Match {
  readonly query_id: string;
  readonly rank: number;
  readonly title: string;
  readonly scores: MatchScores;
  readonly thread_available: boolean;
}

export interface QueryResponse {
  readonly matches: Match[];
  readonly elapsed_ms: number;
}

export interface ThreadPost {
  readonly author_role: string;
  readonly body: string;
}

export interface ThreadResponse {
  readonly query_id: string;
  readonly posts: ThreadPost[];
}

export interface BlendWeights {
  readonly p: number;
  readonly q: number;
  readonly r: number;
}

export type RankingMode = "weighted" | "jaccard" | "cosine_title" | "cosine_content";

export interface ServiceDefaults {
  readonly k: number;
  readonly threshold: number;
  readonly weights: BlendWeights;
  readonly mode: RankingMode;
  readonly cascade: { readonly enabled: boolean; readonly m: number };
}

export interface QueryRequest {
  title: string;
  content: string;
  tags?: string[];
  k?: number;
  threshold?: number;
  mode?: RankingMode;
  weights?: BlendWeights;
  cascade?: { m: number } | null;
}
