// Blind A/B arena voting. The payload from the service carries only
// screenshot refs; nothing model-identifying ever reaches the DOM.

import { ApiClient } from '../api'
import type { MatchPayload } from '../types'

export interface JudgeViewDeps {
  api: ApiClient
  container: HTMLElement
  judgeId: string
  documentRef?: Document
  onVoted?: (battles: number) => void
}

export class JudgeView {
  match: MatchPayload = null!
  pendingBattles = 0
  submitted = false
  private doc: Document

  constructor(private deps: JudgeViewDeps) {
    this.doc = deps.documentRef ?? document
  }

  async load(): Promise<void> {
    this.match = await this.deps.api.arenaMatch()
    this.submitted = false
    this.render()
  }

  async vote(side: 'left' | 'right'): Promise<void> {
    if (this.submitted) return
    this.submitted = true
    try {
      const result = await this.deps.api.submitJudgment(this.match.match_id, side, this.deps.judgeId)
      this.pendingBattles = result.battles
    } catch (error) {
      this.submitted = false
      throw error
    }
    this.renderCount()
    this.deps.onVoted?.(this.pendingBattles)
  }

  private render(): void {
    const root = this.deps.container
    root.innerHTML = ''

    const description = this.doc.createElement('p')
    description.className = 'task-description'
    description.textContent = this.match.description

    const row = this.doc.createElement('div')
    row.className = 'compare-row'
    for (const [side, ref] of [
      ['left', this.match.left_ref],
      ['right', this.match.right_ref],
    ] as const) {
      const cell = this.doc.createElement('div')
      const img = this.doc.createElement('img')
      img.src = this.deps.api.blobUrl(ref)
      img.alt = `${side} candidate`
      const button = this.doc.createElement('button')
      button.dataset.side = side
      button.textContent = `${side} has the better design`
      button.addEventListener('click', () => void this.vote(side))
      cell.append(img, button)
      row.appendChild(cell)
    }

    const counter = this.doc.createElement('p')
    counter.className = 'battle-count'

    root.append(description, row, counter)
    this.renderCount()
  }

  private renderCount(): void {
    const counter = this.deps.container.querySelector('p.battle-count')
    if (counter) counter.textContent = `battles recorded: ${this.pendingBattles}`
  }
}
