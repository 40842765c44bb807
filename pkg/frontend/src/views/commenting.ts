// Screenshot plus a text field that builds an ordered critique list.
// Enter appends, items can be deleted before submit, empty list is blocked.

import { ApiClient, newRecordId } from '../api'
import type { DraftStore } from '../drafts'
import { memoryDrafts } from '../drafts'
import type { AnnotationRecord, CommentPayload, TaskPayload } from '../types'
import { validComments } from '../validation'

export interface CommentingViewDeps {
  api: ApiClient
  container: HTMLElement
  annotator: string
  documentRef?: Document
  drafts?: DraftStore
  now?: () => number
  onSubmitted?: (recordId: string) => void
}

export class CommentingView {
  task: TaskPayload = null!
  comments: string[] = []
  submitted = false
  private startedAt = 0
  private doc: Document
  private drafts: DraftStore
  private now: () => number

  constructor(private deps: CommentingViewDeps) {
    this.doc = deps.documentRef ?? document
    this.drafts = deps.drafts ?? memoryDrafts()
    this.now = deps.now ?? (() => Date.now())
  }

  private draftKey(): string {
    return `comments:${this.task.candidate_ids[0]}:${this.deps.annotator}`
  }

  async load(): Promise<void> {
    this.task = await this.deps.api.nextTask('commenting', this.deps.annotator)
    this.comments = this.drafts.load<string[]>(this.draftKey()) ?? []
    this.submitted = false
    this.startedAt = this.now()
    this.render()
  }

  addComment(text: string): void {
    const trimmed = text.trim()
    if (!trimmed) return // blank entries are ignored
    this.comments.push(trimmed)
    this.drafts.save(this.draftKey(), this.comments)
    this.renderList()
  }

  removeComment(index: number): void {
    this.comments.splice(index, 1)
    this.drafts.save(this.draftKey(), this.comments)
    this.renderList()
  }

  buildRecord(): AnnotationRecord {
    const elapsed = (this.now() - this.startedAt) / 1000
    const payload: CommentPayload = {
      candidate_id: this.task.candidate_ids[0],
      comments: [...this.comments],
      annotator_id: this.deps.annotator,
    }
    return { record_id: newRecordId(), interface: 'commenting', elapsed_s: elapsed, payload }
  }

  canSubmit(): boolean {
    return !this.submitted && validComments({
      candidate_id: this.task?.candidate_ids[0] ?? '',
      comments: this.comments,
      annotator_id: this.deps.annotator,
    }) === null
  }

  async submit(): Promise<void> {
    if (!this.canSubmit()) throw new Error('add at least one comment first')
    const record = this.buildRecord()
    this.submitted = true
    try {
      await this.deps.api.submitAnnotation(record)
    } catch (error) {
      this.submitted = false
      throw error
    }
    this.drafts.clear(this.draftKey())
    this.deps.onSubmitted?.(record.record_id)
  }

  private render(): void {
    const root = this.deps.container
    root.innerHTML = ''

    const description = this.doc.createElement('p')
    description.textContent = this.task.description
    const img = this.doc.createElement('img')
    img.src = this.deps.api.blobUrl(this.task.screenshot_refs[0])
    img.alt = 'candidate screenshot'

    const field = this.doc.createElement('input')
    field.type = 'text'
    field.placeholder = 'write a critique, press Enter'
    field.addEventListener('keydown', (event) => {
      if ((event as KeyboardEvent).key === 'Enter') {
        this.addComment(field.value)
        field.value = ''
      }
    })

    const list = this.doc.createElement('ul')
    list.className = 'comment-list'

    const submit = this.doc.createElement('button')
    submit.className = 'submit'
    submit.textContent = 'submit critiques'
    submit.addEventListener('click', () => void this.submit())

    root.append(description, img, field, list, submit)
    this.renderList()
  }

  private renderList(): void {
    const list = this.deps.container.querySelector('ul.comment-list')
    if (!list) return
    list.innerHTML = ''
    this.comments.forEach((comment, index) => {
      const item = this.doc.createElement('li')
      item.textContent = comment
      const remove = this.doc.createElement('button')
      remove.textContent = 'delete'
      remove.addEventListener('click', () => this.removeComment(index))
      item.appendChild(remove)
      list.appendChild(item)
    })
    const submit = this.deps.container.querySelector<HTMLButtonElement>('button.submit')
    if (submit) submit.disabled = !this.canSubmit()
  }
}
