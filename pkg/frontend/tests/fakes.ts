// In-memory stand-in for the service, recording every submission.

import type { AnnotationRecord, MatchPayload, RatingsReport, TaskPayload } from '../src/types'

export interface FakeService {
  fetchFn: typeof fetch
  submitted: AnnotationRecord[]
  judgments: Array<{ match_id: string; winner: string; judge_id: string }>
  blobs: Map<string, Uint8Array>
}

export interface FakeOptions {
  task?: Partial<TaskPayload>
  match?: MatchPayload
  ratings?: RatingsReport
  failFirstPost?: boolean
}

export function defaultTask(): TaskPayload {
  return {
    interface: 'ranking',
    description_id: 'd-000001-abcd1234',
    description: 'a meditation timer with a segmented control',
    candidate_ids: ['c-000010-aaaa1111', 'c-000011-bbbb2222'],
    screenshot_refs: ['f'.repeat(64), 'e'.repeat(64)],
    sketch_refs: ['a'.repeat(64)],
  }
}

export function fakeService(options: FakeOptions = {}): FakeService {
  const submitted: AnnotationRecord[] = []
  const judgments: Array<{ match_id: string; winner: string; judge_id: string }> = []
  const blobs = new Map<string, Uint8Array>()
  let failNextPost = options.failFirstPost ?? false

  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input)
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), { status, headers: { 'content-type': 'application/json' } })

    if (url.includes('/tasks/next')) {
      return json({ ...defaultTask(), ...options.task })
    }
    if (url.endsWith('/annotations') && init?.method === 'POST') {
      if (failNextPost) {
        failNextPost = false
        return new Response('{"detail": "boom"}', { status: 500 })
      }
      const record = JSON.parse(String(init.body)) as AnnotationRecord
      submitted.push(record)
      return json({ record_id: record.record_id, interface: record.interface })
    }
    if (url.endsWith('/arena/match')) {
      return json(
        options.match ?? {
          match_id: 'match-123',
          description: 'a flight booking checkout',
          left_ref: '1'.repeat(64),
          right_ref: '2'.repeat(64),
        },
      )
    }
    if (url.endsWith('/arena/judgments') && init?.method === 'POST') {
      const body = JSON.parse(String(init.body))
      judgments.push(body)
      return json({ recorded: true, battles: judgments.length })
    }
    if (url.endsWith('/reports/ratings')) {
      return json(options.ratings ?? emptyRatings())
    }
    if (url.endsWith('/blobs') && init?.method === 'POST') {
      const data = new Uint8Array(init.body as ArrayBuffer | Uint8Array)
      const ref = 'blob-' + blobs.size
      blobs.set(ref, data)
      return json({ ref })
    }
    if (url.includes('/blobs/')) {
      return new Response(new Uint8Array([137, 80, 78, 71]), { status: 200 })
    }
    return new Response('{"detail": "not found"}', { status: 404 })
  }) as typeof fetch

  return { fetchFn, submitted, judgments, blobs }
}

export function emptyRatings(): RatingsReport {
  return { battles: 0, ratings: {}, win_rates: {}, average_win_rate: {} }
}
