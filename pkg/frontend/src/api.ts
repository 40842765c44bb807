// Typed client for the service endpoints. Submission is optimistic with
// retry on transient network failure; client-generated record ids make the
// replay idempotent server-side.

import type { AnnotationRecord, MatchPayload, RatingsReport, TaskPayload } from './types'

export interface ApiOptions {
  baseUrl: string
  fetchFn?: typeof fetch
  retries?: number
  retryDelayMs?: number
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail)
  }
}

export class ApiClient {
  private fetchFn: typeof fetch
  private retries: number
  private retryDelayMs: number

  constructor(private options: ApiOptions) {
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis)
    this.retries = options.retries ?? 2
    this.retryDelayMs = options.retryDelayMs ?? 300
  }

  private url(path: string): string {
    return this.options.baseUrl.replace(/\/$/, '') + path
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let lastError: unknown
    for (let attempt = 0; attempt <= this.retries; attempt++) {
      try {
        const response = await this.fetchFn(this.url(path), init)
        if (response.status >= 500) throw new Error(`server error ${response.status}`)
        if (!response.ok) {
          const body = await response.json().catch(() => ({ detail: response.statusText }))
          throw new ApiError(response.status, body.detail ?? 'request failed')
        }
        return (await response.json()) as T
      } catch (error) {
        if (error instanceof ApiError) throw error // 4xx: not retryable
        lastError = error
        if (attempt < this.retries) {
          await new Promise((r) => setTimeout(r, this.retryDelayMs))
        }
      }
    }
    throw lastError
  }

  nextTask(interfaceName: string, annotator: string): Promise<TaskPayload> {
    const query = new URLSearchParams({ interface: interfaceName, annotator })
    return this.request(`/tasks/next?${query}`)
  }

  submitAnnotation(record: AnnotationRecord): Promise<{ record_id: string }> {
    return this.request('/annotations', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(record),
    })
  }

  arenaMatch(): Promise<MatchPayload> {
    return this.request('/arena/match')
  }

  submitJudgment(matchId: string, winner: 'left' | 'right', judgeId: string): Promise<{ battles: number }> {
    return this.request('/arena/judgments', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ match_id: matchId, winner, judge_id: judgeId }),
    })
  }

  ratings(): Promise<RatingsReport> {
    return this.request('/reports/ratings')
  }

  blobUrl(ref: string): string {
    return this.url(`/blobs/${ref}`)
  }

  async putBlob(data: Uint8Array): Promise<string> {
    const body = await this.request<{ ref: string }>('/blobs', {
      method: 'POST',
      headers: { 'content-type': 'application/octet-stream' },
      body: data as BodyInit,
    })
    return body.ref
  }
}

export function newRecordId(): string {
  const bytes = new Uint8Array(8)
  crypto.getRandomValues(bytes)
  return 'ann-' + Array.from(bytes, (b) => b.toString(16).padStart(2, '0')).join('')
}
