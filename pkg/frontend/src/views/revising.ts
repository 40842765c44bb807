// Download the original sketch document, upload the revised one. Uploading
// the same bytes is rejected client-side by hash equality; the task is only
// marked complete after the server acknowledges the record.

import { ApiClient, newRecordId } from '../api'
import type { AnnotationRecord, RevisionPayload, TaskPayload } from '../types'
import { validRevision } from '../validation'

export interface RevisingViewDeps {
  api: ApiClient
  container: HTMLElement
  annotator: string
  documentRef?: Document
  hashFn?: (data: Uint8Array) => Promise<string>
  uploadBlob?: (data: Uint8Array) => Promise<string> // returns the stored ref
  now?: () => number
  onSubmitted?: (recordId: string) => void
}

export async function sha256Hex(data: Uint8Array): Promise<string> {
  const digest = await crypto.subtle.digest('SHA-256', data as BufferSource)
  return Array.from(new Uint8Array(digest), (b) => b.toString(16).padStart(2, '0')).join('')
}

export class RevisingView {
  task: TaskPayload = null!
  complete = false
  lastError: string | null = null
  private originalHash = ''
  private startedAt = 0
  private doc: Document
  private now: () => number
  private hashFn: (data: Uint8Array) => Promise<string>

  constructor(private deps: RevisingViewDeps) {
    this.doc = deps.documentRef ?? document
    this.now = deps.now ?? (() => Date.now())
    this.hashFn = deps.hashFn ?? sha256Hex
  }

  async load(): Promise<void> {
    this.task = await this.deps.api.nextTask('revising', this.deps.annotator)
    this.complete = false
    this.lastError = null
    // the blob store is content-addressed: the ref IS the content hash
    this.originalHash = this.task.sketch_refs[0]
    this.startedAt = this.now()
    this.render()
  }

  async acceptUpload(data: Uint8Array): Promise<AnnotationRecord | null> {
    this.lastError = null
    const hash = await this.hashFn(data)
    if (hash === this.originalHash) {
      this.lastError = 'this file is identical to the original; make a change first'
      this.renderStatus()
      return null
    }
    const upload = this.deps.uploadBlob ?? ((d: Uint8Array) => this.deps.api.putBlob(d))
    const revisedRef = await upload(data)
    const elapsed = (this.now() - this.startedAt) / 1000
    const payload: RevisionPayload = {
      candidate_id: this.task.candidate_ids[0],
      original_sketch_ref: this.task.sketch_refs[0],
      revised_sketch_ref: revisedRef,
      annotator_id: this.deps.annotator,
    }
    const problem = validRevision(payload)
    if (problem) {
      this.lastError = problem
      this.renderStatus()
      return null
    }
    const record: AnnotationRecord = {
      record_id: newRecordId(),
      interface: 'revising',
      elapsed_s: elapsed,
      payload,
    }
    await this.deps.api.submitAnnotation(record)
    this.complete = true // only after the server acknowledged
    this.renderStatus()
    this.deps.onSubmitted?.(record.record_id)
    return record
  }

  private render(): void {
    const root = this.deps.container
    root.innerHTML = ''

    const description = this.doc.createElement('p')
    description.textContent = this.task.description
    const img = this.doc.createElement('img')
    img.src = this.deps.api.blobUrl(this.task.screenshot_refs[0])
    img.alt = 'candidate screenshot'

    const download = this.doc.createElement('a')
    download.href = this.deps.api.blobUrl(this.task.sketch_refs[0])
    download.download = 'original.sketchdoc'
    download.textContent = 'download the editable document'

    const upload = this.doc.createElement('input')
    upload.type = 'file'
    upload.addEventListener('change', async () => {
      const file = upload.files?.[0]
      if (!file) return
      const data = new Uint8Array(await file.arrayBuffer())
      await this.acceptUpload(data)
    })

    const status = this.doc.createElement('p')
    status.className = 'status'

    root.append(description, img, download, upload, status)
    this.renderStatus()
  }

  private renderStatus(): void {
    const status = this.deps.container.querySelector('p.status')
    if (!status) return
    status.textContent = this.complete
      ? 'revision recorded'
      : this.lastError ?? 'upload your revised document when ready'
  }
}
