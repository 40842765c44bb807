import { describe, expect, test } from 'vitest'

import { validComments, validRanking, validRevision, validSketch } from '../src/validation'

describe('client-side validity rules', () => {
  test('ranking needs distinct candidates and a winner', () => {
    expect(
      validRanking({
        description_id: 'd',
        left_candidate: 'a',
        right_candidate: 'a',
        winner: 'left',
        annotator_id: 'p',
        elapsed_s: 1,
      }),
    ).toMatch(/differ/)
    expect(
      validRanking({
        description_id: 'd',
        left_candidate: 'a',
        right_candidate: 'b',
        winner: 'left',
        annotator_id: 'p',
        elapsed_s: 1,
      }),
    ).toBeNull()
  })

  test('comments must be present and non-blank', () => {
    expect(validComments({ candidate_id: 'c', comments: [], annotator_id: 'p' })).toMatch(/at least one/)
    expect(validComments({ candidate_id: 'c', comments: ['ok', '  '], annotator_id: 'p' })).toMatch(/non-empty/)
    expect(validComments({ candidate_id: 'c', comments: ['ok'], annotator_id: 'p' })).toBeNull()
  })

  test('sketch items need text and positive box extent', () => {
    expect(validSketch({ candidate_id: 'c', items: [], annotator_id: 'p' })).toMatch(/at least one/)
    expect(
      validSketch({
        candidate_id: 'c',
        items: [{ region: { kind: 'box', bbox: [0, 0, 0, 5] }, comment: 'x' }],
        annotator_id: 'p',
      }),
    ).toMatch(/positive/)
    expect(
      validSketch({
        candidate_id: 'c',
        items: [{ region: { kind: 'point', point: [3, 4] }, comment: 'move' }],
        annotator_id: 'p',
      }),
    ).toBeNull()
  })

  test('revision requires a changed file', () => {
    expect(
      validRevision({
        candidate_id: 'c',
        original_sketch_ref: 'same',
        revised_sketch_ref: 'same',
        annotator_id: 'p',
      }),
    ).toMatch(/unchanged/)
    expect(
      validRevision({
        candidate_id: 'c',
        original_sketch_ref: 'a',
        revised_sketch_ref: 'b',
        annotator_id: 'p',
      }),
    ).toBeNull()
  })
})
