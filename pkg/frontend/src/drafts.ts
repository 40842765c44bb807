// Unsent drafts survive reloads; everything else is server state.

export interface DraftStore {
  save(key: string, value: unknown): void
  load<T>(key: string): T | null
  clear(key: string): void
}

export function localDrafts(storage: Storage = localStorage): DraftStore {
  return {
    save(key, value) {
      storage.setItem(`uipref-draft:${key}`, JSON.stringify(value))
    },
    load<T>(key: string): T | null {
      const raw = storage.getItem(`uipref-draft:${key}`)
      return raw === null ? null : (JSON.parse(raw) as T)
    },
    clear(key) {
      storage.removeItem(`uipref-draft:${key}`)
    },
  }
}

export function memoryDrafts(): DraftStore {
  const map = new Map<string, string>()
  return {
    save: (key, value) => void map.set(key, JSON.stringify(value)),
    load: <T>(key: string): T | null => {
      const raw = map.get(key)
      return raw === undefined ? null : (JSON.parse(raw) as T)
    },
    clear: (key) => void map.delete(key),
  }
}
