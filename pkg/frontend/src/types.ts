// Wire types mirroring the service's documented JSON formats.

export interface TaskPayload {
  interface: string
  description_id: string
  description: string
  candidate_ids: string[]
  screenshot_refs: string[]
  sketch_refs: string[]
}

export interface BoxRegion {
  kind: 'box'
  bbox: [number, number, number, number]
}

export interface PointRegion {
  kind: 'point'
  point: [number, number]
}

export type Region = BoxRegion | PointRegion

export interface SketchItem {
  region: Region
  comment: string
}

export interface RankingPayload {
  description_id: string
  left_candidate: string
  right_candidate: string
  winner: 'left' | 'right'
  annotator_id: string
  elapsed_s: number
}

export interface CommentPayload {
  candidate_id: string
  comments: string[]
  annotator_id: string
}

export interface SketchPayload {
  candidate_id: string
  items: SketchItem[]
  annotator_id: string
}

export interface RevisionPayload {
  candidate_id: string
  original_sketch_ref: string
  revised_sketch_ref: string
  annotator_id: string
}

export interface AnnotationRecord {
  record_id: string
  interface: 'ranking' | 'commenting' | 'sketching' | 'revising'
  elapsed_s: number
  payload: RankingPayload | CommentPayload | SketchPayload | RevisionPayload
}

export interface MatchPayload {
  match_id: string
  description: string
  left_ref: string
  right_ref: string
}

export interface ModelRating {
  median: number
  ci_low: number
  ci_high: number
}

export interface RatingsReport {
  battles: number
  ratings: Record<string, ModelRating>
  win_rates: Record<string, number>
  average_win_rate: Record<string, number>
}
