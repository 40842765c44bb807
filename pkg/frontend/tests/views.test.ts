// @vitest-environment happy-dom

import { beforeEach, describe, expect, test } from 'vitest'

import { ApiClient } from '../src/api'
import { memoryDrafts } from '../src/drafts'
import type { CommentPayload, RankingPayload, SketchPayload } from '../src/types'
import { validateRecord } from '../src/validation'
import { CommentingView } from '../src/views/commenting'
import { JudgeView } from '../src/views/judge'
import { RankingView } from '../src/views/ranking'
import { RevisingView } from '../src/views/revising'
import { SketchingView } from '../src/views/sketching'
import { fakeService } from './fakes'

function client(service: ReturnType<typeof fakeService>): ApiClient {
  return new ApiClient({ baseUrl: 'http://fake', fetchFn: service.fetchFn, retries: 1, retryDelayMs: 1 })
}

function container(): HTMLElement {
  const el = document.createElement('div')
  document.body.appendChild(el)
  return el
}

beforeEach(() => {
  document.body.innerHTML = ''
})

describe('ranking view', () => {
  test('click left submits winner=left and passes validation', async () => {
    const service = fakeService()
    const view = new RankingView({ api: client(service), container: container(), annotator: 'p01' })
    await view.load()
    await view.choose('left')
    expect(service.submitted).toHaveLength(1)
    const record = service.submitted[0]
    expect(record.interface).toBe('ranking')
    expect((record.payload as RankingPayload).winner).toBe('left')
    expect(validateRecord(record)).toBeNull()
  })

  test('double submit is suppressed', async () => {
    const service = fakeService()
    const view = new RankingView({ api: client(service), container: container(), annotator: 'p01' })
    await view.load()
    await Promise.all([view.choose('left'), view.choose('right')])
    await view.choose('right')
    expect(service.submitted).toHaveLength(1)
  })

  test('arrow keys mirror the buttons', async () => {
    const service = fakeService()
    const view = new RankingView({ api: client(service), container: container(), annotator: 'p01' })
    await view.load()
    document.dispatchEvent(new KeyboardEvent('keydown', { key: 'ArrowRight' }))
    await new Promise((r) => setTimeout(r, 0))
    expect(service.submitted).toHaveLength(1)
    expect((service.submitted[0].payload as RankingPayload).winner).toBe('right')
  })

  test('elapsed time is recorded from task load to click', async () => {
    const service = fakeService()
    let clock = 1000
    const view = new RankingView({
      api: client(service),
      container: container(),
      annotator: 'p01',
      now: () => clock,
    })
    await view.load()
    clock += 12_500
    await view.choose('left')
    expect((service.submitted[0].payload as RankingPayload).elapsed_s).toBeCloseTo(12.5)
  })

  test('failed submit re-arms the view', async () => {
    const service = fakeService({ failFirstPost: true })
    const api = new ApiClient({ baseUrl: 'http://fake', fetchFn: service.fetchFn, retries: 0 })
    const view = new RankingView({ api, container: container(), annotator: 'p01' })
    await view.load()
    await expect(view.choose('left')).rejects.toBeTruthy()
    expect(view.submitted).toBe(false)
    await view.choose('left')
    expect(service.submitted).toHaveLength(1)
  })

  test('sustained judging exceeds 4 judgments per minute on fixture data', async () => {
    // the view adds no friction beyond the network: 20 full load->judge
    // cycles must finish far inside the 5-minute budget that 4/min implies
    const service = fakeService()
    const view = new RankingView({ api: client(service), container: container(), annotator: 'p01' })
    const started = Date.now()
    for (let i = 0; i < 20; i++) {
      await view.load()
      await view.choose(i % 2 === 0 ? 'left' : 'right')
    }
    const minutes = (Date.now() - started) / 60_000
    expect(service.submitted).toHaveLength(20)
    expect(20 / Math.max(minutes, 1e-9)).toBeGreaterThan(4)
  })
})

describe('commenting view', () => {
  async function mounted(service = fakeService()) {
    const view = new CommentingView({
      api: client(service),
      container: container(),
      annotator: 'p02',
      drafts: memoryDrafts(),
    })
    await view.load()
    return view
  }

  test('three entries submit in entry order', async () => {
    const service = fakeService()
    const view = await mounted(service)
    view.addComment('first note')
    view.addComment('second note')
    view.addComment('third note')
    await view.submit()
    const payload = service.submitted[0].payload as CommentPayload
    expect(payload.comments).toEqual(['first note', 'second note', 'third note'])
    expect(validateRecord(service.submitted[0])).toBeNull()
  })

  test('blank entries are ignored', async () => {
    const view = await mounted()
    view.addComment('   ')
    expect(view.comments).toEqual([])
    expect(view.canSubmit()).toBe(false)
  })

  test('items can be deleted before submit', async () => {
    const view = await mounted()
    view.addComment('keep me')
    view.addComment('drop me')
    view.removeComment(1)
    expect(view.comments).toEqual(['keep me'])
  })

  test('submit with empty list is blocked', async () => {
    const view = await mounted()
    await expect(view.submit()).rejects.toThrow(/at least one/)
  })

  test('enter key in the field appends to the DOM list', async () => {
    const service = fakeService()
    const root = container()
    const view = new CommentingView({
      api: client(service),
      container: root,
      annotator: 'p02',
      drafts: memoryDrafts(),
    })
    await view.load()
    const field = root.querySelector('input')!
    field.value = 'typed through the ui'
    field.dispatchEvent(new KeyboardEvent('keydown', { key: 'Enter' }))
    expect(root.querySelectorAll('ul.comment-list li')).toHaveLength(1)
    expect(view.comments).toEqual(['typed through the ui'])
  })

  test('unsent drafts survive a reload; submit clears them', async () => {
    const drafts = memoryDrafts()
    const service = fakeService()
    const first = new CommentingView({
      api: client(service),
      container: container(),
      annotator: 'p02',
      drafts,
    })
    await first.load()
    first.addComment('written before the tab closed')

    const reloaded = new CommentingView({
      api: client(service),
      container: container(),
      annotator: 'p02',
      drafts,
    })
    await reloaded.load()
    expect(reloaded.comments).toEqual(['written before the tab closed'])
    await reloaded.submit()

    const afterSubmit = new CommentingView({
      api: client(service),
      container: container(),
      annotator: 'p02',
      drafts,
    })
    await afterSubmit.load()
    expect(afterSubmit.comments).toEqual([])
  })
})

describe('sketching view', () => {
  async function mounted(service = fakeService(), displayScale = 1) {
    const view = new SketchingView({
      api: client(service),
      container: container(),
      annotator: 'p03',
      displayScale,
      promptForComment: () => 'prompted text',
    })
    await view.load()
    return view
  }

  test('drag makes the documented box geometry', async () => {
    const view = await mounted()
    view.pointerDown(10, 10)
    const region = view.pointerUp(110, 60)
    expect(region).toEqual({ kind: 'box', bbox: [10, 10, 100, 50] })
  })

  test('click places a point', async () => {
    const view = await mounted()
    view.pointerDown(50, 80)
    const region = view.pointerUp(51, 81)
    expect(region.kind).toBe('point')
  })

  test('region without text cannot be saved', async () => {
    const view = await mounted()
    view.pointerDown(0, 0)
    view.pointerUp(40, 40)
    expect(view.attachComment('   ')).toBe(false)
    expect(view.items).toHaveLength(0)
    expect(view.canSubmit()).toBe(false)
  })

  test('submitted payload passes validation and keeps screenshot pixels', async () => {
    const service = fakeService()
    const view = await mounted(service, 0.5) // screenshot rendered at half size
    view.pointerDown(10, 10)
    view.pointerUp(110, 60)
    view.attachComment('align these cards')
    await view.submit()
    const payload = service.submitted[0].payload as SketchPayload
    // display px / 0.5 = screenshot px
    expect(payload.items[0].region).toEqual({ kind: 'box', bbox: [20, 20, 200, 100] })
    expect(validateRecord(service.submitted[0])).toBeNull()
  })

  test('regions are editable before submit', async () => {
    const view = await mounted()
    view.pointerDown(0, 0)
    view.pointerUp(40, 40)
    view.attachComment('first')
    view.pointerDown(60, 60)
    view.pointerUp(90, 90)
    view.attachComment('second')
    view.removeItem(0)
    expect(view.items.map((i) => i.comment)).toEqual(['second'])
  })
})

describe('revising view', () => {
  const original = new Uint8Array([1, 2, 3, 4])

  async function mounted(service = fakeService()) {
    const hashes = new Map<string, string>()
    const fakeHash = async (data: Uint8Array) => {
      const key = data.join(',')
      if (!hashes.has(key)) hashes.set(key, key === original.join(',') ? 'a'.repeat(64) : `h-${key}`)
      return hashes.get(key)!
    }
    const view = new RevisingView({
      api: client(service),
      container: container(),
      annotator: 'p04',
      hashFn: fakeHash,
      uploadBlob: async () => 'uploaded-ref-1',
    })
    await view.load() // fake task's sketch ref is 'a'*64
    return view
  }

  test('identical bytes are rejected inline', async () => {
    const view = await mounted()
    const record = await view.acceptUpload(original)
    expect(record).toBeNull()
    expect(view.lastError).toMatch(/identical/)
    expect(view.complete).toBe(false)
  })

  test('differing bytes produce an accepted record', async () => {
    const service = fakeService()
    const view = await mounted(service)
    const record = await view.acceptUpload(new Uint8Array([9, 9, 9]))
    expect(record).not.toBeNull()
    expect(view.complete).toBe(true)
    expect(validateRecord(service.submitted[0])).toBeNull()
  })

  test('task is complete only after server acknowledgment', async () => {
    const service = fakeService({ failFirstPost: true })
    const api = new ApiClient({ baseUrl: 'http://fake', fetchFn: service.fetchFn, retries: 0 })
    const view = new RevisingView({
      api,
      container: container(),
      annotator: 'p04',
      hashFn: async () => 'different-hash',
      uploadBlob: async () => 'uploaded-ref-2',
    })
    await view.load()
    await expect(view.acceptUpload(new Uint8Array([5]))).rejects.toBeTruthy()
    expect(view.complete).toBe(false)
    await view.acceptUpload(new Uint8Array([5]))
    expect(view.complete).toBe(true)
  })
})

describe('judge view', () => {
  test('vote posts a battle and bumps the pending count immediately', async () => {
    const service = fakeService()
    const view = new JudgeView({ api: client(service), container: container(), judgeId: 'j1' })
    await view.load()
    await view.vote('left')
    expect(service.judgments).toEqual([{ match_id: 'match-123', winner: 'left', judge_id: 'j1' }])
    expect(view.pendingBattles).toBe(1)
    expect(document.body.textContent).toContain('battles recorded: 1')
  })

  test('judge DOM contains no model identifiers', async () => {
    const service = fakeService()
    const root = container()
    const view = new JudgeView({ api: client(service), container: root, judgeId: 'j1' })
    await view.load()
    const dom = root.innerHTML.toLowerCase()
    // names that exist server-side in this scenario must never reach the DOM
    for (const name of ['alpha', 'beta', 'generator', 'model_a', 'model_b', 'match-123']) {
      expect(dom).not.toContain(name)
    }
    expect(root.querySelectorAll('button')).toHaveLength(2)
  })

  test('double vote suppressed', async () => {
    const service = fakeService()
    const view = new JudgeView({ api: client(service), container: container(), judgeId: 'j1' })
    await view.load()
    await view.vote('left')
    await view.vote('right')
    expect(service.judgments).toHaveLength(1)
  })
})
