// Side-by-side screenshots with two choice buttons; left/right arrows mirror
// the buttons. One click submits; double submits are suppressed.

import { ApiClient, newRecordId } from '../api'
import type { AnnotationRecord, RankingPayload, TaskPayload } from '../types'
import { validRanking } from '../validation'

export interface RankingViewDeps {
  api: ApiClient
  container: HTMLElement
  annotator: string
  documentRef?: Document
  now?: () => number
  onSubmitted?: (recordId: string) => void
}

export class RankingView {
  task: TaskPayload = null!
  submitted = false
  private startedAt = 0
  private now: () => number
  private doc: Document

  constructor(private deps: RankingViewDeps) {
    this.now = deps.now ?? (() => Date.now())
    this.doc = deps.documentRef ?? document
  }

  async load(): Promise<void> {
    this.task = await this.deps.api.nextTask('ranking', this.deps.annotator)
    this.submitted = false
    this.startedAt = this.now()
    this.render()
  }

  private render(): void {
    const task = this.task
    const root = this.deps.container
    root.innerHTML = ''

    const description = this.doc.createElement('p')
    description.className = 'task-description'
    description.textContent = task.description
    root.appendChild(description)

    const row = this.doc.createElement('div')
    row.className = 'compare-row'
    for (const [side, ref] of [
      ['left', task.screenshot_refs[0]],
      ['right', task.screenshot_refs[1]],
    ] as const) {
      const cell = this.doc.createElement('div')
      const img = this.doc.createElement('img')
      img.src = this.deps.api.blobUrl(ref)
      img.alt = `candidate ${side}`
      const button = this.doc.createElement('button')
      button.dataset.side = side
      button.textContent = `${side} is better designed`
      button.addEventListener('click', () => void this.choose(side))
      cell.append(img, button)
      row.appendChild(cell)
    }
    root.appendChild(row)

    this.doc.addEventListener('keydown', this.onKey)
  }

  private onKey = (event: KeyboardEvent): void => {
    if (event.key === 'ArrowLeft') void this.choose('left')
    if (event.key === 'ArrowRight') void this.choose('right')
  }

  buildRecord(winner: 'left' | 'right'): AnnotationRecord {
    const task = this.task
    const elapsed = (this.now() - this.startedAt) / 1000
    const payload: RankingPayload = {
      description_id: task.description_id,
      left_candidate: task.candidate_ids[0],
      right_candidate: task.candidate_ids[1],
      winner,
      annotator_id: this.deps.annotator,
      elapsed_s: elapsed,
    }
    return { record_id: newRecordId(), interface: 'ranking', elapsed_s: elapsed, payload }
  }

  async choose(winner: 'left' | 'right'): Promise<void> {
    if (this.submitted || !this.task) return
    const record = this.buildRecord(winner)
    const problem = validRanking(record.payload as RankingPayload)
    if (problem) throw new Error(problem)
    this.submitted = true // suppress double-submit before the response lands
    try {
      await this.deps.api.submitAnnotation(record)
    } catch (error) {
      this.submitted = false
      throw error
    }
    this.doc.removeEventListener('keydown', this.onKey)
    this.deps.onSubmitted?.(record.record_id)
  }
}
