// Canvas overlay on the screenshot: drag draws a box, click places a point,
// each region needs a comment before it joins the list. Regions can be
// deleted before submit. Coordinates are sent in screenshot pixels together
// with the display scale; the server does the CSS-pixel conversion.

import { ApiClient, newRecordId } from '../api'
import { displayToScreenshot, dragToBox } from '../coords'
import type { AnnotationRecord, Region, SketchItem, SketchPayload, TaskPayload } from '../types'
import { validSketch } from '../validation'

export interface SketchingViewDeps {
  api: ApiClient
  container: HTMLElement
  annotator: string
  documentRef?: Document
  displayScale?: number // display px per screenshot px
  promptForComment?: (region: Region) => string | null
  now?: () => number
  onSubmitted?: (recordId: string) => void
}

const CLICK_TOLERANCE_PX = 3

export class SketchingView {
  task: TaskPayload = null!
  items: SketchItem[] = []
  pending: Region | null = null
  submitted = false
  private startedAt = 0
  private dragStart: [number, number] | null = null
  private doc: Document
  private now: () => number

  constructor(private deps: SketchingViewDeps) {
    this.doc = deps.documentRef ?? document
    this.now = deps.now ?? (() => Date.now())
  }

  private get scale(): number {
    return this.deps.displayScale ?? 1
  }

  async load(): Promise<void> {
    this.task = await this.deps.api.nextTask('sketching', this.deps.annotator)
    this.items = []
    this.pending = null
    this.submitted = false
    this.startedAt = this.now()
    this.render()
  }

  // drag in display pixels; stored in screenshot pixels
  pointerDown(x: number, y: number): void {
    this.dragStart = [x, y]
  }

  pointerUp(x: number, y: number): Region {
    const [x0, y0] = this.dragStart ?? [x, y]
    this.dragStart = null
    const width = Math.abs(x - x0)
    const height = Math.abs(y - y0)
    const displayRegion: Region =
      width <= CLICK_TOLERANCE_PX && height <= CLICK_TOLERANCE_PX
        ? { kind: 'point', point: [x, y] }
        : dragToBox(x0, y0, x, y)
    this.pending = displayToScreenshot(displayRegion, this.scale)
    return this.pending
  }

  attachComment(comment: string): boolean {
    if (!this.pending) return false
    if (!comment.trim()) return false // a region without text cannot be saved
    this.items.push({ region: this.pending, comment: comment.trim() })
    this.pending = null
    this.renderList()
    return true
  }

  discardPending(): void {
    this.pending = null
  }

  removeItem(index: number): void {
    this.items.splice(index, 1)
    this.renderList()
  }

  buildRecord(): AnnotationRecord {
    const elapsed = (this.now() - this.startedAt) / 1000
    const payload: SketchPayload = {
      candidate_id: this.task.candidate_ids[0],
      items: this.items.map((i) => ({ region: i.region, comment: i.comment })),
      annotator_id: this.deps.annotator,
    }
    return { record_id: newRecordId(), interface: 'sketching', elapsed_s: elapsed, payload }
  }

  canSubmit(): boolean {
    if (this.submitted || !this.task) return false
    return (
      validSketch({
        candidate_id: this.task.candidate_ids[0],
        items: this.items,
        annotator_id: this.deps.annotator,
      }) === null
    )
  }

  async submit(): Promise<void> {
    if (!this.canSubmit()) throw new Error('draw and describe at least one region')
    const record = this.buildRecord()
    this.submitted = true
    try {
      await this.deps.api.submitAnnotation(record)
    } catch (error) {
      this.submitted = false
      throw error
    }
    this.deps.onSubmitted?.(record.record_id)
  }

  private render(): void {
    const root = this.deps.container
    root.innerHTML = ''

    const description = this.doc.createElement('p')
    description.textContent = this.task.description

    const stage = this.doc.createElement('div')
    stage.className = 'sketch-stage'
    const img = this.doc.createElement('img')
    img.src = this.deps.api.blobUrl(this.task.screenshot_refs[0])
    img.alt = 'candidate screenshot'
    const canvas = this.doc.createElement('canvas')
    canvas.className = 'sketch-overlay'
    stage.append(img, canvas)

    canvas.addEventListener('mousedown', (event) => {
      const e = event as MouseEvent
      this.pointerDown(e.offsetX, e.offsetY)
    })
    canvas.addEventListener('mouseup', (event) => {
      const e = event as MouseEvent
      this.pointerUp(e.offsetX, e.offsetY)
      const ask = this.deps.promptForComment ?? ((_r: Region) => this.doc.defaultView?.prompt?.('feedback for this region') ?? null)
      const comment = ask(this.pending!)
      if (comment === null || !this.attachComment(comment)) this.discardPending()
    })

    const list = this.doc.createElement('ul')
    list.className = 'region-list'

    const submit = this.doc.createElement('button')
    submit.className = 'submit'
    submit.textContent = 'submit annotations'
    submit.addEventListener('click', () => void this.submit())

    root.append(description, stage, list, submit)
    this.renderList()
  }

  private renderList(): void {
    const list = this.deps.container.querySelector('ul.region-list')
    if (!list) return
    list.innerHTML = ''
    this.items.forEach((item, index) => {
      const li = this.doc.createElement('li')
      const where =
        item.region.kind === 'box'
          ? `box(${item.region.bbox.map((v) => v.toFixed(0)).join(', ')})`
          : `point(${item.region.point.map((v) => v.toFixed(0)).join(', ')})`
      li.textContent = `${where}: ${item.comment}`
      const remove = this.doc.createElement('button')
      remove.textContent = 'delete'
      remove.addEventListener('click', () => this.removeItem(index))
      li.appendChild(remove)
      list.appendChild(li)
    })
    const submit = this.deps.container.querySelector<HTMLButtonElement>('button.submit')
    if (submit) submit.disabled = !this.canSubmit()
  }
}
