// Entry point: a tiny hash router over the six views.

import { ApiClient } from './api'
import { localDrafts } from './drafts'
import { CommentingView } from './views/commenting'
import { DashboardView } from './views/dashboard'
import { JudgeView } from './views/judge'
import { RankingView } from './views/ranking'
import { RevisingView } from './views/revising'
import { SketchingView } from './views/sketching'

const TUTORIALS: Record<string, string> = {
  ranking:
    'Pick the screen you feel is better designed. If both are flawed, pick the better starting point for fixing.',
  commenting:
    'Write a list of natural-language critiques for this screen. Press Enter after each one.',
  sketching:
    'Drag a box (or click a point) on an area to improve, then describe the change you would make.',
  revising:
    'Download the editable document, improve the design in your editor, and upload the revised file.',
  judge: 'Two anonymous generators produced these screens. Vote for the better design.',
  dashboard: 'Live Elo medians with 95% bootstrap intervals and pairwise win rates.',
}

function annotatorId(): string {
  const existing = localStorage.getItem('uipref-annotator')
  if (existing) return existing
  const fresh = 'anon-' + Math.random().toString(16).slice(2, 10)
  localStorage.setItem('uipref-annotator', fresh)
  return fresh
}

async function route(): Promise<void> {
  const api = new ApiClient({ baseUrl: localStorage.getItem('uipref-api') ?? 'http://127.0.0.1:8000' })
  const container = document.getElementById('view')!
  const tutorial = document.getElementById('tutorial')!
  const mode = location.hash.replace('#', '') || 'ranking'
  tutorial.textContent = TUTORIALS[mode] ?? ''
  const annotator = annotatorId()

  const next = () => setTimeout(() => void route(), 400)
  try {
    switch (mode) {
      case 'ranking':
        await new RankingView({ api, container, annotator, onSubmitted: next }).load()
        break
      case 'commenting':
        await new CommentingView({ api, container, annotator, drafts: localDrafts(), onSubmitted: next }).load()
        break
      case 'sketching':
        await new SketchingView({ api, container, annotator, onSubmitted: next }).load()
        break
      case 'revising':
        await new RevisingView({ api, container, annotator, onSubmitted: next }).load()
        break
      case 'judge':
        await new JudgeView({ api, container, judgeId: annotator, onVoted: next }).load()
        break
      case 'dashboard':
        await new DashboardView({ api, container }).load()
        break
      default:
        container.textContent = `unknown view: ${mode}`
    }
  } catch (error) {
    container.textContent = String(error)
  }
}

window.addEventListener('hashchange', () => void route())
window.addEventListener('DOMContentLoaded', () => void route())
