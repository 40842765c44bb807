// Client-side validity rules. Each is a strict subset of what the server
// enforces, so anything that passes here is accepted unmodified server-side.

import type {
  AnnotationRecord,
  CommentPayload,
  RankingPayload,
  RevisionPayload,
  SketchPayload,
} from './types'

export function validRanking(p: RankingPayload): string | null {
  if (p.left_candidate === p.right_candidate) return 'candidates must differ'
  if (p.winner !== 'left' && p.winner !== 'right') return 'pick a winner'
  if (!p.annotator_id) return 'missing annotator'
  return null
}

export function validComments(p: CommentPayload): string | null {
  if (p.comments.length === 0) return 'add at least one comment'
  if (p.comments.some((c) => c.trim().length === 0)) return 'comments must be non-empty'
  if (!p.annotator_id) return 'missing annotator'
  return null
}

export function validSketch(p: SketchPayload): string | null {
  if (p.items.length === 0) return 'draw at least one region'
  for (const item of p.items) {
    if (item.comment.trim().length === 0) return 'every region needs a comment'
    if (item.region.kind === 'box') {
      const [, , w, h] = item.region.bbox
      if (w <= 0 || h <= 0) return 'boxes need positive extent'
    }
  }
  if (!p.annotator_id) return 'missing annotator'
  return null
}

export function validRevision(p: RevisionPayload): string | null {
  if (!p.revised_sketch_ref) return 'upload the revised file'
  if (p.revised_sketch_ref === p.original_sketch_ref) return 'file is unchanged'
  if (!p.annotator_id) return 'missing annotator'
  return null
}

export function validateRecord(record: AnnotationRecord): string | null {
  if (!record.record_id) return 'missing record id'
  switch (record.interface) {
    case 'ranking':
      return validRanking(record.payload as RankingPayload)
    case 'commenting':
      return validComments(record.payload as CommentPayload)
    case 'sketching':
      return validSketch(record.payload as SketchPayload)
    case 'revising':
      return validRevision(record.payload as RevisionPayload)
    default:
      return `unknown interface ${(record as AnnotationRecord).interface}`
  }
}
